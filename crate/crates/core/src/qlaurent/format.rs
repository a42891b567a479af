use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::series::{QuarterExp, QuarterSeries};

/// `q`, `q^2`, `q^(1/2)`, `q^(-3/4)`; empty for the constant monomial.
fn power_of_q(k: i64) -> String {
    let g = k.gcd(&4);
    let (num, den) = (k / g, 4 / g);
    match (num, den) {
        (0, _) => String::new(),
        (1, 1) => "q".to_string(),
        (n, 1) => format!("q^{n}"),
        (n, d) => format!("q^({n}/{d})"),
    }
}

impl fmt::Display for QuarterSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.iter() {
            let mag = c.abs();
            let q = power_of_q(k.0);
            let body = if q.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                q
            } else {
                format!("{mag}*{q}")
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        let t = self.trunc().0;
        let order = if t == 0 { "1".to_string() } else { power_of_q(t) };
        if first {
            write!(f, "O({order})")
        } else {
            write!(f, " + O({order})")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    trunc: i64,
    terms: Vec<(i64, String)>,
}

impl Serialize for QuarterSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesJson {
            trunc: self.trunc().0,
            terms: self.iter().map(|(k, c)| (k.0, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuarterSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(d)?;
        let mut last = None;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (k, c) in raw.terms {
            if k >= raw.trunc {
                return Err(D::Error::custom(format!("exponent {k} is not below trunc {}", raw.trunc)));
            }
            if last.is_some_and(|l| l >= k) {
                return Err(D::Error::custom("terms must be strictly ascending"));
            }
            last = Some(k);
            let c: BigInt = c.parse().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            if c == BigInt::default() {
                return Err(D::Error::custom("zero coefficient stored"));
            }
            terms.push((QuarterExp(k), c));
        }
        Ok(QuarterSeries::from_terms(terms, QuarterExp(raw.trunc)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_form() {
        let s = QuarterSeries::from_terms(
            [(QuarterExp(0), 1), (QuarterExp(4), -2), (QuarterExp(6), -3), (QuarterExp(8), 1)],
            QuarterExp(44),
        );
        assert_eq!(s.to_string(), "1 - 2*q - 3*q^(3/2) + q^2 + O(q^11)");
        assert_eq!(QuarterSeries::zero(QuarterExp(44)).to_string(), "O(q^11)");
        let neg = QuarterSeries::from_terms([(QuarterExp(-2), -1), (QuarterExp(1), 5)], QuarterExp(3));
        assert_eq!(neg.to_string(), "-q^(-1/2) + 5*q^(1/4) + O(q^(3/4))");
    }

    #[test]
    fn json_round_trip() {
        let s = QuarterSeries::from_terms([(QuarterExp(-4), 7), (QuarterExp(6), -12)], QuarterExp(40));
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"trunc":40,"terms":[[-4,"7"],[6,"-12"]]}"#);
        let back: QuarterSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn json_rejects_bad_documents() {
        for bad in [
            r#"{"trunc":4,"terms":[[4,"1"]]}"#,
            r#"{"trunc":40,"terms":[[4,"1"],[0,"1"]]}"#,
            r#"{"trunc":40,"terms":[[4,"0"]]}"#,
            r#"{"trunc":40,"terms":[[4,"x"]]}"#,
        ] {
            assert!(serde_json::from_str::<QuarterSeries>(bad).is_err(), "{bad}");
        }
    }
}
