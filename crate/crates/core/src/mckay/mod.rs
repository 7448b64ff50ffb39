//! Character tables, McKay quivers, the imaginary root δ and framing.

mod group;
mod quiver;

pub use group::{character_table, CharacterTable, GroupSpec, Irrep, CHARACTER_TOL};
pub use quiver::{
    delta, frame, framed_mckay_quiver, mckay_quiver, Arrow, DimensionVector, FramedQuiver, McKayQuiver, Vertex,
};
