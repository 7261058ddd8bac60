use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

/// Integer Laurent polynomial in `q`, zero coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coef: i64, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coef);
        p
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn add_term(&mut self, exp: i64, coef: i64) {
        let c = self.terms.entry(exp).or_insert(0);
        *c = c.checked_add(coef).expect("coefficient overflow");
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs, ascending exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1.checked_mul(c2).expect("coefficient overflow"));
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect() }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (&e, &c)) in self.terms.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if k == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            let var = match e {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{e}"),
            };
            if var.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                f.write_str(&var)?;
            } else {
                write!(f, "{mag}{var}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        let mut p = LaurentPoly::one();
        p.add_term(-2, 1);
        assert_eq!(p.to_string(), "1 + q^-2");
        let mut p = LaurentPoly::monomial(-1, 2);
        p.add_term(1, 3);
        p.add_term(-1, -2);
        assert_eq!(p.to_string(), "-q^2 + 3q - 2q^-1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }

    #[test]
    fn binomial_power() {
        let mut b = LaurentPoly::monomial(1, 1);
        b.add_term(-1, 1);
        let p = b.pow(3);
        assert_eq!(p.to_string(), "q^3 + 3q + 3q^-1 + q^-3");
        assert_eq!(p.eval_at_one(), 8);
    }

    #[test]
    fn cancellation_drops_terms() {
        let p = LaurentPoly::monomial(2, 5);
        let z = &p + &(-&p);
        assert!(z.is_zero());
    }
}
