//! Elements of the value group (1/p)Z together with infinity.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A valuation: a rational number whose denominator divides p, or infinity.
///
/// Finite values are kept in lowest terms with a positive denominator, so
/// structural equality is numeric equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Finite { num: i64, den: u64 },
    Infinity,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Value {
    pub fn int(n: i64) -> Value {
        Value::Finite { num: n, den: 1 }
    }

    /// num / den in lowest terms; `den` must be nonzero.
    pub fn frac(num: i64, den: u64) -> Value {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den).max(1);
        Value::Finite {
            num: num / g as i64,
            den: den / g,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Value::Finite { .. })
    }

    /// The value as an integer, when it is one.
    pub fn as_int(&self) -> Option<i64> {
        match *self {
            Value::Finite { num, den: 1 } => Some(num),
            _ => None,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Value) -> Value {
        match (self, other) {
            (Value::Finite { num: a, den: b }, Value::Finite { num: c, den: d }) => {
                let l = b / gcd(b, d) * d;
                Value::frac(a * (l / b) as i64 + c * (l / d) as i64, l)
            }
            _ => Value::Infinity,
        }
    }

    pub fn scale(self, k: i64) -> Value {
        match self {
            Value::Finite { num, den } => Value::frac(num * k, den),
            Value::Infinity => Value::Infinity,
        }
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Infinity, Value::Infinity) => Ordering::Equal,
            (Value::Infinity, _) => Ordering::Greater,
            (_, Value::Infinity) => Ordering::Less,
            (Value::Finite { num: a, den: b }, Value::Finite { num: c, den: d }) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite { num, den: 1 } => write!(f, "{num}"),
            Value::Finite { num, den } => write!(f, "{num}/{den}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

/// Integers serialize as JSON numbers, everything else as its display form.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.as_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&self.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_arithmetic() {
        assert!(Value::frac(-1, 2) < Value::int(0));
        assert!(Value::frac(-1, 2) > Value::int(-1));
        assert!(Value::int(1_000_000) < Value::Infinity);
        assert_eq!(Value::frac(2, 4), Value::frac(1, 2));
        assert_eq!(Value::frac(-1, 3).add(Value::frac(1, 3)), Value::int(0));
        assert_eq!(Value::int(3).add(Value::Infinity), Value::Infinity);
        assert_eq!(Value::frac(-3, 3), Value::int(-1));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(Value::frac(-1, 2).to_string(), "-1/2");
        assert_eq!(serde_json::to_string(&Value::int(4)).unwrap(), "4");
        assert_eq!(serde_json::to_string(&Value::frac(-1, 3)).unwrap(), "\"-1/3\"");
        assert_eq!(serde_json::to_string(&Value::Infinity).unwrap(), "\"inf\"");
    }
}
