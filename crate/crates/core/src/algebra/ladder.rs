//! Normal-form polynomials in bosonic ladder operators, applied to Fock states
//! with the exact rules `a^dag|n> = sqrt(n+1)|n+1>` and `a|n> = sqrt(n)|n-1>`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::fock::{Mode, ModeOccupation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: Mode,
    pub create: bool,
}

pub fn create(mode: Mode) -> Ladder {
    Ladder { mode, create: true }
}

pub fn annihilate(mode: Mode) -> Ladder {
    Ladder {
        mode,
        create: false,
    }
}

/// Coefficient times a product of ladder operators, written left to right
/// (the rightmost factor acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub ops: Vec<Ladder>,
}

impl Monomial {
    /// Net change of `(n_minus, n_zero, n_plus)`.
    pub fn displacement(&self) -> [i32; 3] {
        let mut d = [0i32; 3];
        for op in &self.ops {
            d[op.mode.index()] += if op.create { 1 } else { -1 };
        }
        d
    }

    /// Image of a Fock state, or `None` when the monomial annihilates it.
    pub fn apply(&self, occ: &ModeOccupation) -> Option<(ModeOccupation, Complex64)> {
        let mut out = *occ;
        let mut amp = 1.0f64;
        for op in self.ops.iter().rev() {
            let n = out.get_mut(op.mode);
            if op.create {
                *n += 1;
                amp *= (*n as f64).sqrt();
            } else {
                if *n == 0 {
                    return None;
                }
                amp *= (*n as f64).sqrt();
                *n -= 1;
            }
        }
        Some((out, self.coeff * amp))
    }

    fn adjoint(&self) -> Monomial {
        Monomial {
            coeff: self.coeff.conj(),
            ops: self
                .ops
                .iter()
                .rev()
                .map(|l| Ladder {
                    mode: l.mode,
                    create: !l.create,
                })
                .collect(),
        }
    }
}

/// Sum of monomials.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        Self {
            terms: vec![Monomial {
                coeff: c,
                ops: Vec::new(),
            }],
        }
    }

    pub fn word(coeff: f64, ops: &[Ladder]) -> Self {
        Self {
            terms: vec![Monomial {
                coeff: Complex64::new(coeff, 0.0),
                ops: ops.to_vec(),
            }],
        }
    }

    /// `a_to^dag a_from`
    pub fn hop(to: Mode, from: Mode) -> Self {
        Self::word(1.0, &[create(to), annihilate(from)])
    }

    pub fn number(mode: Mode) -> Self {
        Self::hop(mode, mode)
    }

    pub fn scale(mut self, c: Complex64) -> Self {
        self.terms.iter_mut().for_each(|t| t.coeff *= c);
        self
    }

    pub fn scale_re(self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(Monomial::adjoint).collect(),
        }
    }

    /// Common displacement of all terms, or `None` if they disagree.
    pub fn displacement(&self) -> Option<[i32; 3]> {
        let mut it = self.terms.iter().map(Monomial::displacement);
        let first = it.next().unwrap_or([0; 3]);
        it.all(|d| d == first).then_some(first)
    }

    /// Image of a Fock state as `(state, amplitude)` pairs (duplicates not merged).
    pub fn apply(
        &self,
        occ: &ModeOccupation,
    ) -> impl Iterator<Item = (ModeOccupation, Complex64)> + '_ {
        let occ = *occ;
        self.terms.iter().filter_map(move |t| t.apply(&occ))
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale_re(-1.0)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                terms.push(Monomial {
                    coeff: a.coeff * b.coeff,
                    ops,
                });
            }
        }
        Polynomial { terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_rules() {
        let occ = ModeOccupation::new(0, 2, 0);
        let (out, amp) = Polynomial::word(1.0, &[annihilate(Mode::Zero)])
            .apply(&occ)
            .next()
            .unwrap();
        assert_eq!(out, ModeOccupation::new(0, 1, 0));
        assert!((amp.re - 2f64.sqrt()).abs() < 1e-15);
        let (out, amp) = Polynomial::word(1.0, &[create(Mode::Plus)])
            .apply(&occ)
            .next()
            .unwrap();
        assert_eq!(out, ModeOccupation::new(0, 2, 1));
        assert_eq!(amp.re, 1.0);
        assert!(Polynomial::word(1.0, &[annihilate(Mode::Minus)])
            .apply(&occ)
            .next()
            .is_none());
    }

    #[test]
    fn spin_mixing_element() {
        // V+ U+ = a+^dag a0 a-^dag a0 on |0,2,0>
        let vu =
            &Polynomial::hop(Mode::Plus, Mode::Zero) * &Polynomial::hop(Mode::Minus, Mode::Zero);
        let (out, amp) = vu.apply(&ModeOccupation::new(0, 2, 0)).next().unwrap();
        assert_eq!(out, ModeOccupation::new(1, 0, 1));
        assert!((amp.re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(vu.displacement(), Some([1, -2, 1]));
    }
}
