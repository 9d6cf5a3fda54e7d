use num::Zero;
use serde::Serialize;

use crate::cyclotomic::{format_rational, Rational};
use crate::error::{Error, Result};

/// Growth exponents of `#{x : Π x_i^{h_i} ≤ X} ≍ X^{1/a} (log X)^{b−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MalleExponents {
    Finite { a: Rational, b: usize },
    /// Some weight is nonpositive, so the region holds infinitely many points.
    Infinite,
}

impl Serialize for MalleExponents {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        match self {
            Self::Finite { a, b } => {
                map.serialize_entry("a", &format_rational(a))?;
                map.serialize_entry("b", b)?;
            }
            Self::Infinite => {
                map.serialize_entry("a", &Option::<String>::None)?;
                map.serialize_entry("infinite", &true)?;
            }
        }
        map.end()
    }
}

/// `a = min h_i` and `b = #{i : h_i = a}`.
pub fn malle_exponents(h: &[Rational]) -> Result<MalleExponents> {
    let Some(a) = h.iter().min() else {
        return Err(Error::InvalidArgument("no weights given".into()));
    };
    if *a <= Rational::zero() {
        return Ok(MalleExponents::Infinite);
    }
    let b = h.iter().filter(|x| *x == a).count();
    Ok(MalleExponents::Finite { a: a.clone(), b })
}
