//! Superficial degree of divergence of QED diagrams with regulated fermions.
//!
//! Each loop contributes four powers of momentum, each photon line two
//! inverse powers, and each fermion line `1 + N` inverse powers once `N`
//! regulator masses are in place:
//!
//! ```text
//! D = 4 L - (1 + N) F - 2 B
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Loop and internal-line counts of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramSpec {
    pub name: String,
    pub loops: u32,
    pub fermion_internal: u32,
    pub photon_internal: u32,
}

impl DiagramSpec {
    pub fn new(name: impl Into<String>, loops: u32, fermion_internal: u32, photon_internal: u32) -> Result<Self> {
        let name = name.into();
        if loops == 0 {
            return Err(Error::InvalidParameter {
                name: "loops",
                reason: format!("diagram '{name}' needs at least one loop"),
            });
        }
        Ok(Self {
            name,
            loops,
            fermion_internal,
            photon_internal,
        })
    }

    /// Soft validation messages. More photon than fermion lines cannot occur
    /// inside a single QED loop.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.photon_internal > self.fermion_internal {
            out.push(format!(
                "{}: {} photon lines exceed {} fermion lines",
                self.name, self.photon_internal, self.fermion_internal
            ));
        }
        out
    }
}

impl fmt::Display for DiagramSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{},{}",
            self.name, self.loops, self.fermion_internal, self.photon_internal
        )
    }
}

/// Parses `name:L,F,B`.
impl FromStr for DiagramSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidParameter {
            name: "diagrams",
            reason,
        };
        let (name, counts) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected name:L,F,B, got '{s}'")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(bad(format!("missing diagram name in '{s}'")));
        }
        let numbers = counts
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("'{s}': {e}")))?;
        match numbers[..] {
            [l, f, b] => DiagramSpec::new(name, l, f, b),
            _ => Err(bad(format!("expected three counts in '{s}'"))),
        }
    }
}

/// `4 L - (1 + n_reg) F - 2 B`; negative means superficially convergent.
pub fn superficial_degree(diagram: &DiagramSpec, n_reg: u32) -> i64 {
    4 * diagram.loops as i64
        - (1 + n_reg as i64) * diagram.fermion_internal as i64
        - 2 * diagram.photon_internal as i64
}

/// Smallest regulator count that makes the diagram superficially convergent.
pub fn minimal_regulators(diagram: &DiagramSpec) -> Result<u32> {
    if diagram.fermion_internal == 0 {
        return Err(Error::NoFermionLines(diagram.name.clone()));
    }
    let d0 = superficial_degree(diagram, 0);
    if d0 < 0 {
        return Ok(0);
    }
    // D(n) = D(0) - n F < 0  <=>  n > D(0) / F.
    Ok((d0 / diagram.fermion_internal as i64 + 1) as u32)
}

/// One row of the canonical claim table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimRow {
    pub diagram: DiagramSpec,
    pub minimal: u32,
    pub claimed: u32,
    pub matches: bool,
}

/// The four one-loop sub-diagrams and the regulator counts claimed for them.
pub fn canonical_diagrams() -> [(DiagramSpec, u32); 4] {
    let d = |name: &str, l, f, b| DiagramSpec::new(name, l, f, b).expect("one loop");
    [
        (d("tadpole", 1, 1, 0), 4),
        (d("self-mass", 1, 1, 1), 2),
        (d("vac-pol", 1, 2, 0), 2),
        (d("vertex", 1, 2, 1), 1),
    ]
}

pub fn claim_table() -> Vec<ClaimRow> {
    canonical_diagrams()
        .into_iter()
        .map(|(diagram, claimed)| {
            let minimal = minimal_regulators(&diagram).expect("canonical diagrams carry fermion lines");
            ClaimRow {
                diagram,
                minimal,
                claimed,
                matches: minimal == claimed,
            }
        })
        .collect()
}
