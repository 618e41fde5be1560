use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

macro_rules! int_vec {
    ($name:ident) => {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(pub Vec<i64>);

        impl $name {
            pub fn new(coords: Vec<i64>) -> Self {
                $name(coords)
            }

            pub fn zero(len: usize) -> Self {
                $name(vec![0; len])
            }

            pub fn unit(len: usize, i: usize) -> Self {
                let mut v = vec![0; len];
                v[i] = 1;
                $name(v)
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn coords(&self) -> &[i64] {
                &self.0
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&c| c == 0)
            }

            pub fn is_nonneg(&self) -> bool {
                self.0.iter().all(|&c| c >= 0)
            }

            pub fn scale(&self, k: i64) -> Self {
                $name(self.0.iter().map(|c| c * k).collect())
            }

            pub fn dot(&self, other: &[i64]) -> i64 {
                assert_eq!(self.0.len(), other.len(), "length mismatch");
                self.0.iter().zip(other).map(|(a, b)| a * b).sum()
            }

            /// Sum of absolute values.
            pub fn l1(&self) -> i64 {
                self.0.iter().map(|c| c.abs()).sum()
            }
        }

        impl From<Vec<i64>> for $name {
            fn from(v: Vec<i64>) -> Self {
                $name(v)
            }
        }

        impl From<&[i64]> for $name {
            fn from(v: &[i64]) -> Self {
                $name(v.to_vec())
            }
        }

        impl Index<usize> for $name {
            type Output = i64;
            fn index(&self, i: usize) -> &i64 {
                &self.0[i]
            }
        }

        impl IndexMut<usize> for $name {
            fn index_mut(&mut self, i: usize) -> &mut i64 {
                &mut self.0[i]
            }
        }

        impl Add for &$name {
            type Output = $name;
            fn add(self, o: &$name) -> $name {
                assert_eq!(self.0.len(), o.0.len(), "length mismatch");
                $name(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, o: $name) -> $name {
                &self + &o
            }
        }

        impl Sub for &$name {
            type Output = $name;
            fn sub(self, o: &$name) -> $name {
                assert_eq!(self.0.len(), o.0.len(), "length mismatch");
                $name(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, o: $name) -> $name {
                &self - &o
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                $name(self.0.iter().map(|c| -c).collect())
            }
        }

        impl Neg for $name {
            type Output = $name;
            fn neg(self) -> $name {
                -&self
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "(")?;
                for (i, c) in self.0.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    };
}

int_vec!(ExpVec);
int_vec!(UfVec);
