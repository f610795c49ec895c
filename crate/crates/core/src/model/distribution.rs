use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Law of a single height: density, CDF, quantile and support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HeightDistribution {
    /// Uniform on `[0, 1]`.
    Uniform,
    /// Exponential with rate 1.
    Exponential,
    /// `Beta(a, 1)`: density `a x^(a-1)` on `[0, 1]`.
    PowerLaw { a: f64 },
    /// User CDF tabulated on a grid, interpolated monotonically.
    Tabulated(TabulatedCdf),
}

impl HeightDistribution {
    pub fn power_law(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::invalid(format!("power-law exponent must be positive, got {a}")));
        }
        Ok(HeightDistribution::PowerLaw { a })
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            HeightDistribution::Uniform | HeightDistribution::PowerLaw { .. } => (0.0, 1.0),
            HeightDistribution::Exponential => (0.0, f64::INFINITY),
            HeightDistribution::Tabulated(t) => (t.x[0], t.x[t.x.len() - 1]),
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        match self {
            HeightDistribution::Uniform => 1.0,
            HeightDistribution::Exponential => (-x).exp(),
            HeightDistribution::PowerLaw { a } => a * x.powf(a - 1.0),
            HeightDistribution::Tabulated(t) => t.pdf(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return 1.0;
        }
        match self {
            HeightDistribution::Uniform => x,
            HeightDistribution::Exponential => -(-x).exp_m1(),
            HeightDistribution::PowerLaw { a } => x.powf(*a),
            HeightDistribution::Tabulated(t) => t.cdf(x),
        }
    }

    /// Inverse CDF; `quantile(1)` is the upper support end (possibly infinite).
    pub fn quantile(&self, u: f64) -> f64 {
        let (lo, hi) = self.support();
        if u <= 0.0 {
            return lo;
        }
        if u >= 1.0 {
            return hi;
        }
        match self {
            HeightDistribution::Uniform => u,
            HeightDistribution::Exponential => -(-u).ln_1p(),
            HeightDistribution::PowerLaw { a } => u.powf(1.0 / a),
            HeightDistribution::Tabulated(t) => t.quantile(u),
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, HeightDistribution::Uniform)
    }

    /// Short label used in file names and manifests.
    pub fn label(&self) -> String {
        match self {
            HeightDistribution::Uniform => "uniform".into(),
            HeightDistribution::Exponential => "exp".into(),
            HeightDistribution::PowerLaw { a } => format!("beta:{a}"),
            HeightDistribution::Tabulated(t) => format!("table:{}", t.source),
        }
    }

    /// Parses `uniform`, `exp`, `beta:<a>` or `table:<path>`.
    pub fn parse_descriptor(desc: &str) -> Result<Self> {
        let desc = desc.trim();
        match desc {
            "uniform" => return Ok(HeightDistribution::Uniform),
            "exp" | "exponential" => return Ok(HeightDistribution::Exponential),
            _ => {}
        }
        if let Some(a) = desc.strip_prefix("beta:") {
            let a: f64 = a
                .parse()
                .map_err(|_| Error::invalid(format!("bad power-law exponent in '{desc}'")))?;
            return HeightDistribution::power_law(a);
        }
        if let Some(path) = desc.strip_prefix("table:") {
            return Ok(HeightDistribution::Tabulated(TabulatedCdf::from_csv(path)?));
        }
        Err(Error::invalid(format!(
            "unknown distribution '{desc}' (expected uniform, exp, beta:<a> or table:<path>)"
        )))
    }
}

impl FromStr for HeightDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        HeightDistribution::parse_descriptor(s)
    }
}

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolant of a tabulated CDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct TabulatedCdf {
    x: Vec<f64>,
    f: Vec<f64>,
    slopes: Vec<f64>,
    source: String,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    x: Vec<f64>,
    cdf: Vec<f64>,
    #[serde(default)]
    source: String,
}

impl TryFrom<TableRepr> for TabulatedCdf {
    type Error = Error;

    fn try_from(r: TableRepr) -> Result<Self> {
        TabulatedCdf::new(r.x, r.cdf, r.source)
    }
}

impl From<TabulatedCdf> for TableRepr {
    fn from(t: TabulatedCdf) -> Self {
        TableRepr {
            x: t.x,
            cdf: t.f,
            source: t.source,
        }
    }
}

impl TabulatedCdf {
    /// `x` strictly increasing, `cdf` nondecreasing from 0 to 1.
    pub fn new(x: Vec<f64>, cdf: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if x.len() < 2 || x.len() != cdf.len() {
            return Err(Error::invalid("tabulated CDF needs at least two (x, cdf) pairs"));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) || x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("tabulated CDF abscissae must be finite and strictly increasing"));
        }
        if cdf.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::invalid("tabulated CDF values must be nondecreasing"));
        }
        if cdf[0] != 0.0 || cdf[cdf.len() - 1] != 1.0 {
            return Err(Error::invalid("tabulated CDF must start at 0 and end at 1"));
        }
        let slopes = fritsch_carlson_slopes(&x, &cdf);
        Ok(TabulatedCdf {
            x,
            f: cdf,
            slopes,
            source: source.into(),
        })
    }

    /// Reads a two-column CSV with header `x,cdf`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "cdf" {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected header 'x,cdf', found '{}'", headers.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut x = Vec::new();
        let mut f = Vec::new();
        for record in reader.records() {
            let record = record?;
            let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
            let parse = |idx: usize| -> Result<f64> {
                record[idx].trim().parse::<f64>().map_err(|e| Error::Parse {
                    line,
                    column: idx + 1,
                    message: e.to_string(),
                })
            };
            x.push(parse(0)?);
            f.push(parse(1)?);
        }
        TabulatedCdf::new(x, f, path.display().to_string())
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.x.partition_point(|&v| v <= x);
        k.clamp(1, self.x.len() - 1) - 1
    }

    fn cdf(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let h = self.x[k + 1] - self.x[k];
        let t = (x - self.x[k]) / h;
        let (h00, h10, h01, h11) = hermite_basis(t);
        (h00 * self.f[k] + h10 * h * self.slopes[k] + h01 * self.f[k + 1] + h11 * h * self.slopes[k + 1])
            .clamp(0.0, 1.0)
    }

    fn pdf(&self, x: f64) -> f64 {
        let k = self.segment(x);
        let h = self.x[k + 1] - self.x[k];
        let t = (x - self.x[k]) / h;
        let d00 = 6.0 * t * t - 6.0 * t;
        let d10 = 3.0 * t * t - 4.0 * t + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * t * t - 2.0 * t;
        ((d00 * self.f[k] + d01 * self.f[k + 1]) / h + d10 * self.slopes[k] + d11 * self.slopes[k + 1]).max(0.0)
    }

    fn quantile(&self, u: f64) -> f64 {
        // Locate the segment on the tabulated values, then bisect the cubic.
        let k = self.f.partition_point(|&v| v < u).clamp(1, self.f.len() - 1) - 1;
        let (mut lo, mut hi) = (self.x[k], self.x[k + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        t3 - 2.0 * t2 + t,
        -2.0 * t3 + 3.0 * t2,
        t3 - t2,
    )
}

fn fritsch_carlson_slopes(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    let delta: Vec<f64> = (0..n - 1).map(|k| (f[k + 1] - f[k]) / (x[k + 1] - x[k])).collect();
    let mut m = vec![0.0; n];
    m[0] = delta[0];
    m[n - 1] = delta[n - 2];
    for k in 1..n - 1 {
        m[k] = if delta[k - 1] * delta[k] <= 0.0 {
            0.0
        } else {
            0.5 * (delta[k - 1] + delta[k])
        };
    }
    for k in 0..n - 1 {
        if delta[k] == 0.0 {
            m[k] = 0.0;
            m[k + 1] = 0.0;
            continue;
        }
        let a = m[k] / delta[k];
        let b = m[k + 1] / delta[k];
        let s = a * a + b * b;
        if s > 9.0 {
            let tau = 3.0 / s.sqrt();
            m[k] = tau * a * delta[k];
            m[k + 1] = tau * b * delta[k];
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_adaptive;
    use approx::assert_abs_diff_eq;

    fn builtins() -> Vec<HeightDistribution> {
        vec![
            HeightDistribution::Uniform,
            HeightDistribution::Exponential,
            HeightDistribution::power_law(2.0).unwrap(),
            HeightDistribution::power_law(0.5).unwrap(),
        ]
    }

    #[test]
    fn quantile_inverts_cdf() {
        for d in builtins() {
            for k in 1..1000 {
                let u = k as f64 / 1000.0;
                assert!((d.cdf(d.quantile(u)) - u).abs() <= 1e-12, "{d:?} at {u}");
            }
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        for d in builtins() {
            let (lo, hi) = d.support();
            let hi = if hi.is_finite() { hi } else { 60.0 };
            // sqrt-type endpoint behaviour of beta:0.5 handled by substitution x = s^2
            let total = integrate_adaptive(|s| 2.0 * s * d.pdf(s * s), lo.sqrt(), hi.sqrt(), 1e-11).unwrap();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn cdf_endpoints_and_monotone() {
        for d in builtins() {
            let (lo, hi) = d.support();
            assert_eq!(d.cdf(lo), 0.0);
            assert_eq!(d.cdf(hi), 1.0);
            let hi = if hi.is_finite() { hi } else { 30.0 };
            let mut prev = 0.0;
            for k in 0..=500 {
                let x = lo + (hi - lo) * k as f64 / 500.0;
                let c = d.cdf(x);
                assert!(c >= prev);
                prev = c;
            }
        }
    }

    #[test]
    fn descriptors() {
        assert_eq!(HeightDistribution::parse_descriptor("uniform").unwrap(), HeightDistribution::Uniform);
        assert_eq!(HeightDistribution::parse_descriptor("exp").unwrap(), HeightDistribution::Exponential);
        assert_eq!(
            HeightDistribution::parse_descriptor("beta:2").unwrap(),
            HeightDistribution::PowerLaw { a: 2.0 }
        );
        assert!(HeightDistribution::parse_descriptor("beta:-1").is_err());
        assert!(HeightDistribution::parse_descriptor("cauchy").is_err());
    }

    #[test]
    fn tabulated_cdf_matches_smooth_law() {
        // Tabulate Beta(2,1) finely and compare.
        let x: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
        let f: Vec<f64> = x.iter().map(|v| v * v).collect();
        let t = HeightDistribution::Tabulated(TabulatedCdf::new(x, f, "inline").unwrap());
        for k in 1..100 {
            let u = k as f64 / 100.0;
            assert!((t.cdf(t.quantile(u)) - u).abs() <= 1e-12);
            assert!((t.quantile(u) - u.sqrt()).abs() < 1e-5);
        }
        let total = integrate_adaptive(|v| t.pdf(v), 0.0, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn tabulated_from_csv_and_bad_header() {
        let dir = tempfile::tempdir().unwrap();
        let good = dir.path().join("good.csv");
        std::fs::write(&good, "x,cdf\n0,0\n0.5,0.25\n1,1\n").unwrap();
        let d = HeightDistribution::parse_descriptor(&format!("table:{}", good.display())).unwrap();
        assert_eq!(d.support(), (0.0, 1.0));
        let bad = dir.path().join("bad.csv");
        std::fs::write(&bad, "value,prob\n0,0\n1,1\n").unwrap();
        let err = TabulatedCdf::from_csv(&bad).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
    }
}
