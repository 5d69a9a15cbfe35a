use serde::{Deserialize, Serialize};
use std::path::Path;

use super::{BasisConvention, Coherent, DeviceGraph, Segment};
use crate::error::Result;
use crate::units::phase;

/// Frame phases accumulated by one coherent segment: `2π ε₀ t` and
/// `2π E_n t` with `E_n` the filled-band energy of the data partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub segment: usize,
    pub duration_s: f64,
    pub eps0_phase_rad: f64,
    pub filled_band_phase_rad: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub bit_ordering: BasisConvention,
    pub graph: DeviceGraph,
    pub segments: Vec<Segment>,
    pub ledger: Vec<LedgerEntry>,
}

impl Schedule {
    pub fn new(graph: DeviceGraph) -> Self {
        Self {
            bit_ordering: BasisConvention,
            graph,
            segments: Vec::new(),
            ledger: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn push(&mut self, seg: Segment) {
        if let Segment::Coherent(c) = &seg {
            self.ledger.push(self.ledger_entry(self.segments.len(), c));
        }
        self.segments.push(seg);
    }

    pub fn push_coherent(&mut self, c: Coherent) {
        self.push(Segment::Coherent(c));
    }

    /// Appends every segment of `other` (which must share the graph).
    pub fn append(&mut self, other: Schedule) {
        debug_assert_eq!(self.graph, other.graph);
        for seg in other.segments {
            self.push(seg);
        }
    }

    fn ledger_entry(&self, index: usize, c: &Coherent) -> LedgerEntry {
        LedgerEntry {
            segment: index,
            duration_s: c.duration_s,
            eps0_phase_rad: phase(self.graph.eps0_hz(), c.duration_s),
            filled_band_phase_rad: phase(c.filled_band_hz(&self.graph), c.duration_s),
        }
    }

    pub fn coherent_segments(&self) -> impl Iterator<Item = &Coherent> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Coherent(c) => Some(c),
            _ => None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.segments {
            s.validate(&self.graph)?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates a schedule; the ledger is rebuilt from the
    /// segments so it always covers every coherent segment.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Schedule = serde_json::from_str(text)?;
        raw.validate()?;
        let mut s = Schedule::new(raw.graph);
        for seg in raw.segments {
            s.push(seg);
        }
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }
}

/// Sum of coherent segment durations; ideal gates and z corrections take no time.
pub fn total_duration(s: &Schedule) -> f64 {
    s.coherent_segments().map(|c| c.duration_s).sum()
}
