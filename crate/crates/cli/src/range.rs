//! Value-list flags: `a:b:step` ranges, comma lists and single numbers.

use std::str::FromStr;

/// Inclusive arithmetic progression or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

/// Slack in units of `step` when deciding whether `b` is on the progression.
const ENDPOINT_SLACK: f64 = 1e-9;

impl FromStr for Values {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| -> Result<f64, String> {
            let v = t
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("'{t}' is not finite"))
            }
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [a, b, step] => {
                let (a, b, step) = (num(a)?, num(b)?, num(step)?);
                if step <= 0.0 {
                    return Err(format!("range step must be positive, got {step}"));
                }
                if b < a {
                    return Err(format!("range end {b} is below its start {a}"));
                }
                let count = ((b - a) / step + ENDPOINT_SLACK).floor() as usize + 1;
                Ok(Values((0..count).map(|i| a + i as f64 * step).collect()))
            }
            [single] => single.split(',').map(num).collect::<Result<_, _>>().map(Values),
            _ => Err(format!("'{s}' is neither a number, a list nor a:b:step")),
        }
    }
}

/// Comma-separated photon numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonNumbers(pub Vec<u32>);

impl FromStr for PhotonNumbers {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| format!("'{t}' is not a non-negative integer"))
            })
            .collect::<Result<_, _>>()
            .map(PhotonNumbers)
    }
}
