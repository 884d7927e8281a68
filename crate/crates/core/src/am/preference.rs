//! Generalized specificity and its presumption-aware extension.

use super::{AmProgram, Argument, ElementSet};
use crate::error::{IncaError, Result};

/// Largest number of defeasibly derivable literals for which specificity is
/// decided by enumerating every activation set.
pub const DEFAULT_SPECIFICITY_CAP: usize = 16;

pub(crate) struct Specificity<'p> {
    program: &'p AmProgram,
    derivable: Vec<usize>,
    cap: usize,
}

impl<'p> Specificity<'p> {
    pub fn new(program: &'p AmProgram, cap: usize) -> Self {
        Specificity {
            program,
            derivable: program.derivable_ids(),
            cap,
        }
    }

    /// `a1 ≻_PS a2`: quantifies the activation set H over every subset of
    /// the derivable literals that is non-contradictory together with
    /// `Ω(a1) ∪ Ω(a2)`.
    pub fn prefers_ps(&self, a1: &Argument, a2: &Argument) -> Result<bool> {
        if self.derivable.len() > self.cap {
            return Err(IncaError::Capacity {
                what: "defeasibly derivable literals",
                actual: self.derivable.len(),
                cap: self.cap,
            });
        }
        let program = self.program;
        let omega: ElementSet = a1
            .strict_rules()
            .union(a2.strict_rules())
            .copied()
            .collect();
        let with = |delta: &ElementSet| -> ElementSet { omega.union(delta).copied().collect() };
        let omega_d1 = with(a1.defeasible_rules());
        let omega_d2 = with(a2.defeasible_rules());
        let (l1, l2) = (a1.conclusion_id, a2.conclusion_id);

        let mut witness = false;
        let mut activation = Vec::with_capacity(self.derivable.len());
        for mask in 0u32..(1u32 << self.derivable.len()) {
            activation.clear();
            activation.extend(
                self.derivable
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &l)| l),
            );
            let strict_only = program.closure(&omega, &activation);
            if program.has_complementary_pair(&strict_only) {
                continue;
            }
            let l1_from_rules = program.closure(&omega_d1, &activation)[l1];
            let l2_from_rules = program.closure(&omega_d2, &activation)[l2];

            // Every activation of a1 must also activate a2.
            if l1_from_rules && !strict_only[l1] && !l2_from_rules {
                return Ok(false);
            }
            // Some activation of a2 must leave a1 inactive.
            if l2_from_rules && !strict_only[l2] && !l1_from_rules {
                witness = true;
            }
        }
        Ok(witness)
    }

    /// `a1 ≻ a2` under presumption-enabled specificity. Fewer presumptions
    /// win: condition (3a) is `Φ(a1) ⊊ Φ(a2)`.
    pub fn prefers(&self, a1: &Argument, a2: &Argument) -> Result<bool> {
        match (a1.is_factual(), a2.is_factual()) {
            (true, true) => self.prefers_ps(a1, a2),
            (true, false) => Ok(true),
            (false, true) => Ok(false),
            (false, false) => {
                let (p1, p2) = (a1.presumptions(), a2.presumptions());
                if p1.is_subset(p2) && p1 != p2 {
                    Ok(true)
                } else if p1 == p2 {
                    self.prefers_ps(a1, a2)
                } else {
                    Ok(false)
                }
            }
        }
    }
}
