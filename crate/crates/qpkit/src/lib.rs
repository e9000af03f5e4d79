pub mod grass;
pub mod harness;
pub mod homology;
pub mod linalg;
pub mod pathalg;
pub mod polycore;
pub mod repeng;
pub mod seedeng;
