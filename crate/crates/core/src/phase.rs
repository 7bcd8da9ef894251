//! Exact fourth roots of unity, stored as the exponent of `i` mod 4.

use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use num_complex::Complex;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Phase {
        Phase(k.rem_euclid(4) as u8)
    }

    /// `(−1)^k`.
    pub fn minus_one_pow(k: i64) -> Phase {
        Phase::i_pow(2 * k.rem_euclid(2))
    }

    /// `−1` when `negative`, else `+1`.
    pub fn sign(negative: bool) -> Phase {
        if negative {
            Phase::MINUS_ONE
        } else {
            Phase::ONE
        }
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex<i64> {
        match self.0 {
            0 => Complex::new(1, 0),
            1 => Complex::new(0, 1),
            2 => Complex::new(-1, 0),
            _ => Complex::new(0, -1),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

impl std::iter::Product for Phase {
    fn product<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ONE, Mul::mul)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        assert_eq!(Phase::I * Phase::I, Phase::MINUS_ONE);
        assert_eq!(Phase::i_pow(-1), Phase::MINUS_I);
        assert_eq!(Phase::i_pow(6), Phase::MINUS_ONE);
        assert_eq!(Phase::minus_one_pow(-3), Phase::MINUS_ONE);
        assert_eq!(Phase::I.conj(), Phase::MINUS_I);
        assert_eq!(-Phase::ONE, Phase::MINUS_ONE);
        assert_eq!([Phase::I, Phase::I, Phase::I].into_iter().product::<Phase>(), Phase::MINUS_I);
        assert_eq!(Phase::MINUS_I.to_string(), "-i");
        assert_eq!(Phase::I.to_complex() * Phase::I.to_complex(), Phase::MINUS_ONE.to_complex());
    }
}
