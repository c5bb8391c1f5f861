//! Operations on automata and the wire constants.

mod union_find;

pub mod decompose;
pub mod derived;
pub mod parallel;
pub mod sequential;
pub mod wire_forms;

pub use decompose::{elementary_decomposition, Decomposition};
pub use derived::{local_seq, local_sum, pfb, sfb};
pub use parallel::{communicating_parallel, par_constant, par_wire, par_wire_relation, parallel_product, ParRelation};
pub use sequential::{boxplus_sum, seq_compose, seq_constant, seq_wire, seq_wire_relation, SeqRelation};

/// Sequential connectors, each defined by a relation between point sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeqWireKind {
    Identity,
    Codiag,
    CodiagOp,
    Initial,
    InitialOp,
    Twist,
    Delta,
    DeltaInv,
}

/// Parallel connectors, each defined by a relation between alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParWireKind {
    Identity,
    Diag,
    DiagOp,
    Proj,
    ProjOp,
    Twist,
    Codiag,
    CodiagOp,
}

impl SeqWireKind {
    pub const ALL: [SeqWireKind; 8] = [
        SeqWireKind::Identity,
        SeqWireKind::Codiag,
        SeqWireKind::CodiagOp,
        SeqWireKind::Initial,
        SeqWireKind::InitialOp,
        SeqWireKind::Twist,
        SeqWireKind::Delta,
        SeqWireKind::DeltaInv,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            SeqWireKind::Identity => "id",
            SeqWireKind::Codiag => "codiag",
            SeqWireKind::CodiagOp => "codiag_op",
            SeqWireKind::Initial => "init",
            SeqWireKind::InitialOp => "init_op",
            SeqWireKind::Twist => "twist",
            SeqWireKind::Delta => "delta",
            SeqWireKind::DeltaInv => "delta_inv",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

impl ParWireKind {
    pub const ALL: [ParWireKind; 8] = [
        ParWireKind::Identity,
        ParWireKind::Diag,
        ParWireKind::DiagOp,
        ParWireKind::Proj,
        ParWireKind::ProjOp,
        ParWireKind::Twist,
        ParWireKind::Codiag,
        ParWireKind::CodiagOp,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            ParWireKind::Identity => "id",
            ParWireKind::Diag => "diag",
            ParWireKind::DiagOp => "diag_op",
            ParWireKind::Proj => "proj",
            ParWireKind::ProjOp => "proj_op",
            ParWireKind::Twist => "twist",
            ParWireKind::Codiag => "codiag",
            ParWireKind::CodiagOp => "codiag_op",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keywords_round_trip() {
        for k in SeqWireKind::ALL {
            assert_eq!(SeqWireKind::from_keyword(k.keyword()), Some(k));
        }
        for k in ParWireKind::ALL {
            assert_eq!(ParWireKind::from_keyword(k.keyword()), Some(k));
        }
        assert_eq!(SeqWireKind::from_keyword("diag"), None);
    }
}
