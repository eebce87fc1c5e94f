use num_bigint::BigInt;
use num_rational::BigRational;

use super::SimplicialComplex;
use crate::error::{Error, Result};
use crate::scalar::Ring;

/// A `degree`-cochain: one coefficient per `degree`-simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain<T> {
    pub degree: usize,
    pub values: Vec<T>,
}

/// A `degree`-chain: one coefficient per `degree`-simplex.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<T> {
    pub degree: usize,
    pub values: Vec<T>,
}

macro_rules! common {
    ($ty:ident) => {
        impl<T: Ring> $ty<T> {
            pub fn new(degree: usize, values: Vec<T>) -> Self {
                $ty { degree, values }
            }

            pub fn zero(k: &SimplicialComplex, degree: usize) -> Self {
                $ty { degree, values: vec![T::zero(); k.count(degree)] }
            }

            /// Indicator of one simplex.
            pub fn basis(k: &SimplicialComplex, degree: usize, i: usize) -> Self {
                let mut c = Self::zero(k, degree);
                c.values[i] = T::one();
                c
            }

            pub fn from_i64(degree: usize, values: &[i64]) -> Self {
                $ty { degree, values: values.iter().map(|&x| T::from_i64(x).unwrap()).collect() }
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            pub fn is_zero(&self) -> bool {
                self.values.iter().all(|x| x.is_zero())
            }

            pub fn check(&self, k: &SimplicialComplex) -> Result<()> {
                if self.values.len() != k.count(self.degree) {
                    return Err(Error::DimensionMismatch(format!(
                        "{} values for {} simplices of dimension {}",
                        self.values.len(),
                        k.count(self.degree),
                        self.degree
                    )));
                }
                Ok(())
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.degree, other.degree, "degree mismatch");
                $ty {
                    degree: self.degree,
                    values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                assert_eq!(self.degree, other.degree, "degree mismatch");
                $ty {
                    degree: self.degree,
                    values: self.values.iter().zip(&other.values).map(|(a, b)| a.clone() - b.clone()).collect(),
                }
            }

            pub fn scale(&self, c: &T) -> Self {
                $ty { degree: self.degree, values: self.values.iter().map(|a| a.clone() * c.clone()).collect() }
            }

            pub fn neg(&self) -> Self {
                $ty { degree: self.degree, values: self.values.iter().map(|a| -a.clone()).collect() }
            }

            pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> $ty<U> {
                $ty { degree: self.degree, values: self.values.iter().map(f).collect() }
            }
        }

        impl $ty<BigInt> {
            pub fn to_rational(&self) -> $ty<BigRational> {
                self.map(|x| BigRational::from_integer(x.clone()))
            }
        }
    };
}

common!(Cochain);
common!(Chain);

impl<T: Ring> Cochain<T> {
    pub fn coboundary(&self, k: &SimplicialComplex) -> Cochain<T> {
        Cochain { degree: self.degree + 1, values: k.apply_coboundary(self.degree, &self.values) }
    }

    /// `⟨u, c⟩`
    pub fn evaluate(&self, c: &Chain<T>) -> T {
        assert_eq!(self.degree, c.degree, "degree mismatch in evaluation");
        pair(&self.values, &c.values)
    }
}

impl<T: Ring> Chain<T> {
    pub fn boundary(&self, k: &SimplicialComplex) -> Chain<T> {
        Chain { degree: self.degree.saturating_sub(1), values: k.apply_boundary(self.degree, &self.values) }
    }

    pub fn is_cycle(&self, k: &SimplicialComplex) -> bool {
        self.degree == 0 || self.boundary(k).is_zero()
    }
}

pub(crate) fn pair<T: Ring>(u: &[T], c: &[T]) -> T {
    assert_eq!(u.len(), c.len(), "length mismatch in pairing");
    let mut acc = T::zero();
    for (a, b) in u.iter().zip(c) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a.clone() * b.clone();
        }
    }
    acc
}

impl Chain<BigInt> {
    /// The fundamental cycle of an oriented complex.
    pub fn fundamental(k: &SimplicialComplex) -> Option<Self> {
        k.fundamental_cycle().map(|f| Chain::from_i64(k.dimension(), f))
    }
}

impl Cochain<BigRational> {
    /// Evaluation of a rational cochain on an integral chain.
    pub fn evaluate_int(&self, c: &Chain<BigInt>) -> BigRational {
        assert_eq!(self.degree, c.degree, "degree mismatch in evaluation");
        let mut acc = BigRational::from_integer(0.into());
        for (a, b) in self.values.iter().zip(&c.values) {
            if b != &BigInt::from(0) {
                acc += a * BigRational::from_integer(b.clone());
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::circle;

    #[test]
    fn coboundary_and_pairing() {
        let c = circle(3);
        let f = Cochain::<i64>::new(0, vec![0, 1, 5]);
        let df = f.coboundary(&c);
        assert_eq!(df.values, vec![1, 5, 4]);
        let z = Chain::<i64>::new(1, vec![1, -1, 1]);
        assert!(z.is_cycle(&c));
        assert_eq!(df.evaluate(&z), 0);
    }
}
