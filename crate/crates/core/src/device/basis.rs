use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DeviceGraph;

/// Qubit `q` (0-based) is bit `q` of a basis-state index; qubit 1 in the
/// 1-based convention is the least significant bit.
pub const BIT_ORDERING: &str = "little-endian-qubit1-lsb";

/// Marker carried by serialized schedules; deserialization rejects any other
/// ordering string.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BasisConvention;

impl BasisConvention {
    pub fn bit(index: usize, qubit: usize) -> bool {
        index >> qubit & 1 == 1
    }

    /// Full-register index of the SES state `|i)`: only data qubit `i` excited,
    /// every other qubit (data and ancilla) in `|0⟩`.
    pub fn ses_index(graph: &DeviceGraph, i: usize) -> usize {
        1 << graph.data_ids()[i]
    }

    /// Full-register index of the dual state: every data qubit excited except
    /// data qubit `i`; ancillas set to `ancilla_bit`.
    pub fn dual_index(graph: &DeviceGraph, i: usize, ancilla_bit: bool) -> usize {
        let filled: usize = graph.data_ids().iter().map(|q| 1 << q).sum();
        let anc: usize = if ancilla_bit {
            graph.ancilla_ids().iter().map(|q| 1 << q).sum()
        } else {
            0
        };
        (filled & !(1 << graph.data_ids()[i])) | anc
    }
}

impl Serialize for BasisConvention {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(BIT_ORDERING)
    }
}

impl<'de> Deserialize<'de> for BasisConvention {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == BIT_ORDERING {
            Ok(BasisConvention)
        } else {
            Err(serde::de::Error::custom(format!(
                "unsupported bit ordering {s:?}, expected {BIT_ORDERING:?}"
            )))
        }
    }
}
