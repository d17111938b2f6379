//! Grid evaluation of a truncated series.
//!
//! Each row carries the value, the contribution of the outermost shell of
//! coefficients (those with some index at its cap), and a warning flag set
//! when that shell is not negligible: `|tail| > TAIL_TOLERANCE * max(1, |value|)`.
//! A large tail means the truncation is not resolved at that point. Axes
//! with cap 0 carry no truncation information and never put a term in the shell.

use exact_series::SeriesK;

use crate::CliError;

pub const TAIL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    /// Parses `axis=lo:hi:n`.
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let bad = || CliError::Input(format!("grid `{spec}` is not `axis=lo:hi:n`"));
        let (label, range) = spec.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(CliError::Input(format!("grid `{spec}` needs n >= 1 and finite bounds")));
        }
        Ok(Self {
            label: label.trim().to_string(),
            lo,
            hi,
            n,
        })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|k| self.lo + h * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub value: f64,
    pub tail: f64,
    pub warning: bool,
}

pub fn evaluate(series: &SeriesK<f64>, point: &[f64]) -> ProfileRow {
    let caps = series.caps();
    let (mut value, mut tail) = (0.0, 0.0);
    for idx in series.indices() {
        let c = *series.at(&idx);
        if c == 0.0 {
            continue;
        }
        let term = c * idx.iter().zip(point).map(|(&i, x)| x.powi(i as i32)).product::<f64>();
        value += term;
        if idx.iter().zip(caps).any(|(i, &c)| c > 0 && *i == c) {
            tail += term;
        }
    }
    ProfileRow {
        value,
        tail,
        warning: tail.abs() > TAIL_TOLERANCE * value.abs().max(1.0),
    }
}

/// Orders `grids` to match the series axes; every axis needs exactly one grid.
pub fn align(series: &SeriesK<f64>, grids: &[GridAxis]) -> Result<Vec<GridAxis>, CliError> {
    if grids.len() != series.rank() {
        return Err(CliError::Input(format!(
            "need one grid per axis {:?}, got {}",
            series.axes(),
            grids.len()
        )));
    }
    series
        .axes()
        .iter()
        .map(|a| {
            grids
                .iter()
                .find(|g| &g.label == a)
                .cloned()
                .ok_or_else(|| CliError::Input(format!("no grid given for axis `{a}`")))
        })
        .collect()
}

/// CSV with header `<axes...>,<field>,tail,warning`, rows in row-major grid order.
pub fn profile_csv(series: &SeriesK<f64>, field: &str, grids: &[GridAxis]) -> Result<String, CliError> {
    let grids = align(series, grids)?;
    let points: Vec<Vec<f64>> = grids.iter().map(GridAxis::points).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = series.axes().to_vec();
    header.extend([field.to_string(), "tail".into(), "warning".into()]);
    w.write_record(&header).map_err(CliError::input)?;
    let extents: Vec<usize> = points.iter().map(|p| p.len() - 1).collect();
    for idx in exact_series::series::MultiIndexIter::new(&extents) {
        let pt: Vec<f64> = idx.iter().zip(&points).map(|(&k, p)| p[k]).collect();
        let row = evaluate(series, &pt);
        let mut rec: Vec<String> = pt.iter().map(|v| format!("{v:.16e}")).collect();
        rec.push(format!("{:.16e}", row.value));
        rec.push(format!("{:.16e}", row.tail));
        rec.push(u8::from(row.warning).to_string());
        w.write_record(&rec).map_err(CliError::input)?;
    }
    let bytes = w.into_inner().map_err(CliError::input)?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(a: &[&str]) -> Vec<String> {
        SeriesK::<f64>::axis_labels(a)
    }

    #[test]
    fn grid_parsing() {
        let g = GridAxis::parse("x=0:1:5").unwrap();
        assert_eq!(g.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(GridAxis::parse("t=-1:1:1").unwrap().points(), vec![-1.0]);
        for bad in ["x", "x=0:1", "x=0:1:0", "x=a:1:2"] {
            assert!(GridAxis::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn zero_field_gives_zero_rows() {
        let s = SeriesK::<f64>::zeros(labels(&["x", "t"]), vec![3, 2]);
        let csv = profile_csv(&s, "U", &[GridAxis::parse("t=0:1:2").unwrap(), GridAxis::parse("x=0:1:3").unwrap()]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,t,U,tail,warning");
        assert_eq!(lines.len(), 7);
        let zero = format!("{:.16e}", 0.0);
        assert!(lines[1..].iter().all(|l| l.ends_with(&format!(",{zero},{zero},0"))));
    }

    #[test]
    fn tail_is_the_outer_shell() {
        // 1 + x + x^2 with cap 2: the shell is x^2.
        let s = SeriesK::from_vec(labels(&["x"]), vec![2], vec![1.0, 1.0, 1.0]).unwrap();
        let r = evaluate(&s, &[0.5]);
        assert_eq!((r.value, r.tail), (1.75, 0.25));
        assert!(r.warning);
        let r = evaluate(&s, &[1e-5]);
        assert!(!r.warning);
        // A cap-0 axis alone does not make a term part of the shell.
        let s = SeriesK::from_vec(labels(&["x", "z"]), vec![1, 0], vec![1.0, 1e-3]).unwrap();
        let r = evaluate(&s, &[0.5, 7.0]);
        assert_eq!(r.tail, 5e-4);
    }

    #[test]
    fn missing_axis_is_an_error() {
        let s = SeriesK::<f64>::zeros(labels(&["x", "t"]), vec![1, 1]);
        assert!(profile_csv(&s, "U", &[GridAxis::parse("x=0:1:2").unwrap()]).is_err());
        assert!(profile_csv(&s, "U", &[GridAxis::parse("x=0:1:2").unwrap(), GridAxis::parse("y=0:1:2").unwrap()]).is_err());
    }
}
