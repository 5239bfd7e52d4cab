//! Eb/N0 list syntax: `a..b:step` (both ends inclusive) or `x,y,z`.

use anyhow::{bail, Context, Result};

const TOL: f64 = 1e-9;

fn number(s: &str) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .with_context(|| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        bail!("`{s}` is not finite");
    }
    Ok(v)
}

pub fn parse(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if let Some((range, step)) = s.split_once(':') {
        let (a, b) = range
            .split_once("..")
            .with_context(|| format!("expected a..b:step, got `{s}`"))?;
        let (a, b, step) = (number(a)?, number(b)?, number(step)?);
        if step <= 0.0 {
            bail!("step must be positive");
        }
        if b < a {
            bail!("range end {b} is below its start {a}");
        }
        let count = ((b - a) / step + TOL).floor() as usize + 1;
        // Round away accumulated float error so 1.5 + 3 * 0.5 prints as 3.
        Ok((0..count)
            .map(|i| ((a + i as f64 * step) * 1e9).round() / 1e9)
            .collect())
    } else {
        let v: Vec<f64> = s.split(',').map(number).collect::<Result<_>>()?;
        if v.is_empty() {
            bail!("empty Eb/N0 list");
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse("1.5..4.0:0.5").unwrap(), vec![1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
        assert_eq!(parse("0..1:0.1").unwrap().len(), 11);
        assert_eq!(parse("2..2:1").unwrap(), vec![2.0]);
        assert_eq!(parse("-1..0:0.5").unwrap(), vec![-1.0, -0.5, 0.0]);
    }

    #[test]
    fn lists() {
        assert_eq!(parse("2.0").unwrap(), vec![2.0]);
        assert_eq!(parse("1, 2.5,3").unwrap(), vec![1.0, 2.5, 3.0]);
    }

    #[test]
    fn rejects_bad_input() {
        for s in ["", "a", "1..2", "1..2:0", "2..1:0.5", "1..2:-1", "nan"] {
            assert!(parse(s).is_err(), "{s}");
        }
    }
}
