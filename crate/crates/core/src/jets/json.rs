use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::scalar::{Regime, Scalar};

use super::{Jet, MultiIndex};

#[derive(Serialize, Deserialize)]
struct JetRepr {
    n: usize,
    #[serde(rename = "D")]
    cap: u32,
    regime: Regime,
    coeffs: Vec<CoeffRepr>,
}

#[derive(Serialize, Deserialize)]
struct CoeffRepr {
    alpha: Vec<u32>,
    re: Value,
    im: Value,
}

/// Only nonzero coefficients are written, in graded order.
impl<S: Scalar> Serialize for Jet<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> Result<Se::Ok, Se::Error> {
        let coeffs = self
            .terms()
            .filter(|(_, c)| !c.is_zero())
            .map(|(alpha, c)| {
                let (re, im) = c.to_json_parts();
                CoeffRepr {
                    alpha: alpha.entries().to_vec(),
                    re,
                    im,
                }
            })
            .collect();
        JetRepr {
            n: self.n(),
            cap: self.cap(),
            regime: S::REGIME,
            coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Jet<S> {
    fn deserialize<De: Deserializer<'de>>(deserializer: De) -> Result<Self, De::Error> {
        let repr = JetRepr::deserialize(deserializer)?;
        if repr.regime != S::REGIME {
            return Err(De::Error::custom(format!(
                "regime mismatch: document is {}, expected {}",
                repr.regime,
                S::REGIME
            )));
        }
        let mut terms = Vec::with_capacity(repr.coeffs.len());
        for c in repr.coeffs {
            let alpha = MultiIndex::new(c.alpha);
            if alpha.weight() > repr.cap {
                return Err(De::Error::custom(format!(
                    "coefficient {alpha} exceeds cap {}",
                    repr.cap
                )));
            }
            terms.push((
                alpha,
                S::from_json_parts(&c.re, &c.im).map_err(De::Error::custom)?,
            ));
        }
        Jet::from_terms(repr.n, repr.cap, terms).map_err(De::Error::custom)
    }
}
