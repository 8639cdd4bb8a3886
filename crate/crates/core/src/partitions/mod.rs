//! Partitions, Maya diagrams, Schur polynomials and the differential
//! operators built from them.

pub mod diffop;
pub mod maya;
pub mod schur;

pub use diffop::DiffOperator;
pub use maya::{
    partition_of_valuations, valuations_of_partition, virtual_cardinal, MayaDiagram, Partition,
    ValuationSet,
};
pub use schur::{elementary_schur, horizontal_strips, schur, schur_by_alternants};
