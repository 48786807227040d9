//! Exact rationals and their string form at the I/O boundary.
//!
//! Every quantity in the crate is a `Q`. Values cross JSON and the command
//! line as strings (`"p/q"` or `"p"`), never as floats.

use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q(n: i128) -> Q {
    Q::from_integer(n)
}

pub fn frac(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n =
            i128::from_str(n.trim()).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        let d =
            i128::from_str(d.trim()).map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
        if d == 0 {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        Ok(Q::new(n, d))
    } else {
        i128::from_str(s)
            .map(q)
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))
    }
}

/// Parses a comma separated list of rationals, e.g. `"2,0,-3/2,1/2"`.
pub fn parse_q_list(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(parse_q).collect()
}

pub fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            i64::from_str(x.trim()).map_err(|_| Error::Parse(format!("bad integer `{x}` in `{s}`")))
        })
        .collect()
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// `Some(n)` when `x` is an integer that fits in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        i64::try_from(*x.numer()).ok()
    } else {
        None
    }
}

/// Display precision only. Never feed the result back into a computation.
pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Largest integer `r` with `r * r <= n`, for `n >= 0`.
pub fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n.max(0);
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_square(n: i128) -> bool {
    n >= 0 && {
        let r = isqrt(n);
        r * r == n
    }
}

/// Sign-aware comparison `x < sqrt(r2)` for `r2 >= 0`.
pub fn lt_sqrt(x: &Q, r2: &Q) -> bool {
    if x.is_negative() {
        true
    } else {
        x * x < *r2
    }
}

pub fn lcm_denoms<'a>(xs: impl IntoIterator<Item = &'a Q>) -> i128 {
    xs.into_iter().fold(1, |acc, x| acc.lcm(x.denom()))
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_q_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_q(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_q_arr4 {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[Q; 4], s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_q_vec::serialize(xs, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Q; 4], D::Error> {
        let v = serde_q_vec::deserialize(d)?;
        let n = v.len();
        v.try_into()
            .map_err(|_| serde::de::Error::custom(format!("expected 4 entries, got {n}")))
    }
}

pub mod serde_q_opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&x.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q(" -3/2 ").unwrap(), frac(-3, 2));
        assert_eq!(parse_q("4/6").unwrap(), frac(2, 3));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("1.5").is_err());
        assert_eq!(
            parse_q_list("2,0,-3/2,1/2").unwrap(),
            vec![q(2), q(0), frac(-3, 2), frac(1, 2)]
        );
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(frac(-6, 4).to_string(), "-3/2");
        assert_eq!(q(7).to_string(), "7");
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert!(is_square(81));
        assert!(!is_square(80));
        assert!(lt_sqrt(&q(-5), &q(1)));
        assert!(lt_sqrt(&frac(1, 2), &frac(1, 2)));
        assert!(!lt_sqrt(&q(1), &q(1)));
    }
}
