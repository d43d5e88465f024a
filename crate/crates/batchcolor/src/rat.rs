//! Exact rational coordinates. All interval endpoints and cost ratios go
//! through `Rat`; nothing in the cost or geometry path touches floating point.

use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

pub fn rat_int(n: i128) -> Rat {
    Ratio::from_integer(n)
}

/// JSON form of a rational: a `[numerator, denominator]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RatPair(pub Rat);

impl Serialize for RatPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (*self.0.numer(), *self.0.denom()).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (n, den) = <(i128, i128)>::deserialize(d)?;
        if den == 0 {
            return Err(D::Error::custom("rational with zero denominator"));
        }
        Ok(RatPair(Ratio::new(n, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_roundtrip_normalizes() {
        let v: RatPair = serde_json::from_str("[6, 4]").unwrap();
        assert_eq!(v.0, rat(3, 2));
        assert_eq!(serde_json::to_string(&v).unwrap(), "[3,2]");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(serde_json::from_str::<RatPair>("[1, 0]").is_err());
    }
}
