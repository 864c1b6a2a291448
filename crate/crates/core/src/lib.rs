//! Explicit bijection between shifted staircase plane partitions and
//! quasi-transpose-complementary plane partitions, with every intermediate
//! signed-set construction exposed.

pub mod corr;
pub mod espp_chain;
pub mod imjm;
pub mod paths;
pub mod pipeline;
pub mod pp;
pub mod signed;
pub mod stair_chain;
pub mod tableaux;
pub mod verify;
