use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::ladder::{annihilate, Polynomial};
use crate::error::Error;
use crate::fock::Mode::{Minus, Plus, Zero};

/// Symbolic tag for every generator the crate can realize as a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorKind {
    TPlus,
    TMinus,
    T3,
    Tx,
    Ty,
    UPlus,
    UMinus,
    U3,
    VPlus,
    VMinus,
    V3,
    Y,
    Ntot,
    LPlus,
    LMinus,
    Lz,
    L2,
    GY,
    ASinglet,
    AdagA,
    KPlus,
    KMinus,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 22] = [
        OperatorKind::TPlus,
        OperatorKind::TMinus,
        OperatorKind::T3,
        OperatorKind::Tx,
        OperatorKind::Ty,
        OperatorKind::UPlus,
        OperatorKind::UMinus,
        OperatorKind::U3,
        OperatorKind::VPlus,
        OperatorKind::VMinus,
        OperatorKind::V3,
        OperatorKind::Y,
        OperatorKind::Ntot,
        OperatorKind::LPlus,
        OperatorKind::LMinus,
        OperatorKind::Lz,
        OperatorKind::L2,
        OperatorKind::GY,
        OperatorKind::ASinglet,
        OperatorKind::AdagA,
        OperatorKind::KPlus,
        OperatorKind::KMinus,
    ];

    pub fn name(self) -> &'static str {
        use OperatorKind::*;
        match self {
            TPlus => "T_plus",
            TMinus => "T_minus",
            T3 => "T3",
            Tx => "Tx",
            Ty => "Ty",
            UPlus => "U_plus",
            UMinus => "U_minus",
            U3 => "U3",
            VPlus => "V_plus",
            VMinus => "V_minus",
            V3 => "V3",
            Y => "Y",
            Ntot => "Ntot",
            LPlus => "L_plus",
            LMinus => "L_minus",
            Lz => "Lz",
            L2 => "L2",
            GY => "G_Y",
            ASinglet => "A_singlet",
            AdagA => "AdagA",
            KPlus => "K_plus",
            KMinus => "K_minus",
        }
    }

    /// Ladder-operator realization.
    pub fn polynomial(self) -> Polynomial {
        use OperatorKind::*;
        let half = 0.5;
        match self {
            TPlus => Polynomial::hop(Plus, Minus),
            TMinus => Polynomial::hop(Minus, Plus),
            T3 => (Polynomial::number(Plus) - Polynomial::number(Minus)).scale_re(half),
            Tx => (TPlus.polynomial() + TMinus.polynomial()).scale_re(half),
            Ty => (TPlus.polynomial() - TMinus.polynomial()).scale(Complex64::new(0.0, -0.5)),
            UPlus => Polynomial::hop(Minus, Zero),
            UMinus => Polynomial::hop(Zero, Minus),
            U3 => (Polynomial::number(Minus) - Polynomial::number(Zero)).scale_re(half),
            VPlus => Polynomial::hop(Plus, Zero),
            VMinus => Polynomial::hop(Zero, Plus),
            V3 => (Polynomial::number(Plus) - Polynomial::number(Zero)).scale_re(half),
            Y => (Polynomial::number(Plus) + Polynomial::number(Minus)
                - Polynomial::number(Zero).scale_re(2.0))
            .scale_re(1.0 / 3.0),
            Ntot => Polynomial::number(Plus) + Polynomial::number(Minus) + Polynomial::number(Zero),
            LPlus => (VPlus.polynomial() + UMinus.polynomial()).scale_re(2f64.sqrt()),
            LMinus => (VMinus.polynomial() + UPlus.polynomial()).scale_re(2f64.sqrt()),
            Lz => Polynomial::number(Plus) - Polynomial::number(Minus),
            L2 => {
                let lz = Lz.polynomial();
                &LMinus.polynomial() * &LPlus.polynomial() + &lz * &lz + lz
            }
            GY => (KPlus.polynomial() + KMinus.polynomial()).scale_re(2.0),
            ASinglet => (Polynomial::word(1.0, &[annihilate(Zero), annihilate(Zero)])
                - Polynomial::word(2.0, &[annihilate(Plus), annihilate(Minus)]))
            .scale_re(1.0 / 3f64.sqrt()),
            AdagA => {
                let a = ASinglet.polynomial();
                &a.adjoint() * &a
            }
            KPlus => &VPlus.polynomial() * &UPlus.polynomial(),
            KMinus => &UMinus.polynomial() * &VMinus.polynomial(),
        }
    }

    /// Block shift `(dN, dm)`, or `None` for tags such as `Tx` that couple
    /// a block to two different neighbours.
    pub fn block_displacement(self) -> Option<(i32, i32)> {
        let poly = self.polynomial();
        let mut shifts = poly.terms.iter().map(|t| {
            let d = t.displacement();
            (d[0] + d[1] + d[2], d[2] - d[0])
        });
        let first = shifts.next().unwrap_or((0, 0));
        shifts.all(|s| s == first).then_some(first)
    }

    pub fn is_hermitian(self) -> bool {
        use OperatorKind::*;
        matches!(
            self,
            T3 | Tx | Ty | U3 | V3 | Y | Ntot | Lz | L2 | GY | AdagA
        )
    }
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        OperatorKind::ALL
            .iter()
            .copied()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::contract(format!("unknown operator tag `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn displacement_table() {
        use OperatorKind::*;
        let table = [
            (TPlus, (0, 2)),
            (TMinus, (0, -2)),
            (UPlus, (0, -1)),
            (UMinus, (0, 1)),
            (VPlus, (0, 1)),
            (VMinus, (0, -1)),
            (KPlus, (0, 0)),
            (KMinus, (0, 0)),
            (LPlus, (0, 1)),
            (LMinus, (0, -1)),
            (ASinglet, (-2, 0)),
            (AdagA, (0, 0)),
            (GY, (0, 0)),
            (L2, (0, 0)),
        ];
        for (k, d) in table {
            assert_eq!(k.block_displacement(), Some(d), "{k}");
        }
        assert_eq!(Tx.block_displacement(), None);
        assert_eq!(Ty.block_displacement(), None);
        // n_zero moves by -1 under U+ and V+, by -2 under K+
        assert_eq!(UPlus.polynomial().displacement(), Some([1, -1, 0]));
        assert_eq!(VPlus.polynomial().displacement(), Some([0, -1, 1]));
        assert_eq!(KPlus.polynomial().displacement(), Some([1, -2, 1]));
    }

    #[test]
    fn parse_names() {
        for k in OperatorKind::ALL {
            assert_eq!(k.name().parse::<OperatorKind>().unwrap(), k);
        }
        assert!("W_plus".parse::<OperatorKind>().is_err());
    }
}
