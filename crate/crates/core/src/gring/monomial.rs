use std::cmp::Ordering;

/// An exponent vector over a presentation's generators, with its cached degree.
///
/// Ordered by degree first, then lexicographically with later generators heavier.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exponents: Vec<u32>,
}

impl Monomial {
    pub(crate) fn from_parts(degree: u32, exponents: Vec<u32>) -> Self {
        Monomial { degree, exponents }
    }

    /// The empty product over `ngens` generators.
    pub fn one(ngens: usize) -> Self {
        Monomial {
            degree: 0,
            exponents: vec![0; ngens],
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn exponent(&self, generator: usize) -> u32 {
        self.exponents[generator]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.exponents.iter().all(|&e| e == 0)
    }

    /// Whether `self` divides `other` as an exponent vector.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exponents
            .iter()
            .zip(&other.exponents)
            .all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exponents.iter().zip(&other.exponents).rev() {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            self.exponents.len().cmp(&other.exponents.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
