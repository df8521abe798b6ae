//! Test-function specifications on the command line.
//!
//! Grammar: `KIND[:KEY=VALUE,...]` with KIND `gaussian` or `polygauss`.
//! Keys are `s` (Gaussian parameter, default 1), `poly` (Fourier-side
//! prefactor, required for `polygauss`) and `shift` (centre of the test
//! function, comma separated coordinates). Fields may also be separated by
//! `;`. A spec starting with `@` names a JSON file in the schwartz format.
//!
//! Examples: `gaussian:s=1`, `polygauss:poly=x1^2,s=2`,
//! `gaussian:s=1,shift=1,0`.

use fundsol::{parse_polynomial, Error, GaussTerm, Result, TestFunction};
use num_complex::Complex64;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq)]
pub enum TestSpec {
    Gauss {
        s: f64,
        poly: Option<String>,
        shift: Option<Vec<f64>>,
    },
    File(String),
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn parse_real(key: &str, text: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| invalid(format!("{key}: expected a finite number, got {text:?}")))
}

/// Splits `a=1,b=2,3` into `[("a","1"), ("b","2,3")]`: a field without `=`
/// continues the value of the previous key.
fn fields(text: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for part in text.split([',', ';']) {
        match part.split_once('=') {
            Some((k, v)) => out.push((k.trim().to_owned(), v.trim().to_owned())),
            None => match out.last_mut() {
                Some((_, v)) => {
                    v.push(',');
                    v.push_str(part.trim());
                }
                None => return Err(invalid(format!("expected KEY=VALUE, got {part:?}"))),
            },
        }
    }
    Ok(out)
}

impl TestSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(path) = text.strip_prefix('@') {
            return Ok(TestSpec::File(path.to_owned()));
        }
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let mut s = 1.0;
        let mut poly = None;
        let mut shift = None;
        if !rest.trim().is_empty() {
            for (key, value) in fields(rest)? {
                match key.as_str() {
                    "s" => s = parse_real("s", &value)?,
                    "poly" => poly = Some(value),
                    "shift" => {
                        let coords = value
                            .split(',')
                            .map(|c| parse_real("shift", c))
                            .collect::<Result<Vec<_>>>()?;
                        shift = Some(coords);
                    }
                    other => return Err(invalid(format!("unknown test-function key {other:?}"))),
                }
            }
        }
        if !(s > 0.0) {
            return Err(invalid(format!("s must be positive, got {s}")));
        }
        match kind {
            "gaussian" if poly.is_some() => {
                Err(invalid("gaussian takes no poly; use polygauss"))
            }
            "polygauss" if poly.is_none() => Err(invalid("polygauss requires poly=...")),
            "gaussian" | "polygauss" => Ok(TestSpec::Gauss { s, poly, shift }),
            other => Err(invalid(format!(
                "unknown test-function kind {other:?} (expected gaussian or polygauss)"
            ))),
        }
    }

    /// The Gaussian parameter when the spec is an unshifted plain Gaussian.
    pub fn plain_gaussian(&self) -> Option<f64> {
        match self {
            TestSpec::Gauss {
                s,
                poly: None,
                shift: None,
            } => Some(*s),
            _ => None,
        }
    }

    pub fn build(&self, n: usize) -> Result<TestFunction> {
        let (s, poly, shift) = match self {
            TestSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| invalid(format!("cannot read {path}: {e}")))?;
                let f = TestFunction::from_json(&text)?;
                if f.dimension() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: f.dimension(),
                    });
                }
                return Ok(f);
            }
            TestSpec::Gauss { s, poly, shift } => (*s, poly, shift),
        };
        let f = match poly {
            None => TestFunction::gaussian(n, s)?,
            Some(text) => {
                let q = parse_polynomial(text, n)?
                    .map_coefficients(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0));
                TestFunction::poly_gaussian(q, s)?
            }
        };
        match shift {
            None => Ok(f),
            Some(x0) => centred_at(&f, x0),
        }
    }
}

/// y ↦ f(y − x₀), whose Fourier transform is e^{−i⟨x₀,ξ⟩} f̂(ξ).
fn centred_at(f: &TestFunction, x0: &[f64]) -> Result<TestFunction> {
    if x0.len() != f.dimension() {
        return Err(Error::DimensionMismatch {
            expected: f.dimension(),
            found: x0.len(),
        });
    }
    let terms = f
        .terms()
        .iter()
        .map(|t| GaussTerm {
            poly: t.poly.clone(),
            width: t.width,
            modulation: t.modulation.iter().zip(x0).map(|(b, x)| b - x).collect(),
        })
        .collect();
    TestFunction::new(f.dimension(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_forms() {
        assert_eq!(
            TestSpec::parse("gaussian:s=1").unwrap(),
            TestSpec::Gauss { s: 1.0, poly: None, shift: None }
        );
        assert_eq!(
            TestSpec::parse("polygauss:poly=x1^2,s=2").unwrap(),
            TestSpec::Gauss { s: 2.0, poly: Some("x1^2".into()), shift: None }
        );
        assert_eq!(
            TestSpec::parse("gaussian:s=0.5;shift=1,0").unwrap(),
            TestSpec::Gauss { s: 0.5, poly: None, shift: Some(vec![1.0, 0.0]) }
        );
        assert_eq!(
            TestSpec::parse("gaussian:shift=1,-2,s=3").unwrap(),
            TestSpec::Gauss { s: 3.0, poly: None, shift: Some(vec![1.0, -2.0]) }
        );
        assert_eq!(TestSpec::parse("gaussian").unwrap().plain_gaussian(), Some(1.0));
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "gauss:s=1",
            "gaussian:s=-1",
            "gaussian:s=abc",
            "gaussian:t=1",
            "gaussian:poly=x1",
            "polygauss:s=1",
            "gaussian:1",
        ] {
            assert!(TestSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn shift_moves_the_centre() {
        let f = TestSpec::parse("gaussian:s=2,shift=1,0").unwrap().build(2).unwrap();
        let expected = (-2.0f64 * 1.0 / 2.0).exp();
        assert!((f.value_at_origin().re - expected).abs() < 1e-14);
        assert!(TestSpec::parse("gaussian:shift=1").unwrap().build(2).is_err());
    }

    #[test]
    fn polygauss_value_at_origin_uses_the_prefactor() {
        let plain = TestSpec::parse("gaussian:s=1").unwrap().build(2).unwrap();
        let poly = TestSpec::parse("polygauss:poly=2,s=1").unwrap().build(2).unwrap();
        assert!((poly.value_at_origin() - 2.0 * plain.value_at_origin()).norm() < 1e-14);
    }
}
