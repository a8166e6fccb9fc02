//! Tracy-Widom law of order 2.
//!
//! A tabulated CDF on `[-10, 6]` is shipped in `data/tw2_table.txt` and
//! interpolated with a shape-preserving cubic, so quantiles never oscillate
//! in the tails. The table is produced offline by [`generate_tw2_table`].

mod generate;

use std::fmt::Write as _;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use generate::{airy_ai_large, generate_tw2_table, GENERATOR_ID};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Tw2Error {
    #[error("table line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("table checksum mismatch: header {expected}, data {actual}")]
    Checksum { expected: String, actual: String },
    #[error("table header declares {declared} rows but {found} were read")]
    RowCount { declared: usize, found: usize },
    #[error("table is not strictly increasing at row {row}")]
    NotMonotone { row: usize },
    #[error("table tails out of range: cdf[first] = {first:e}, cdf[last] = {last:e}")]
    Tails { first: f64, last: f64 },
    #[error("probability {0} outside (0, 1)")]
    Domain(f64),
    #[error("resolution {0} too small (need ≥ 256)")]
    Resolution(usize),
    #[error("ODE integration failed: {0}")]
    Integration(String),
}

/// Tabulated F2 with monotone cubic interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct Tw2Table {
    grid: Vec<f64>,
    cdf: Vec<f64>,
    slopes: Vec<f64>,
    generator: String,
    checksum: String,
}

impl Tw2Table {
    /// Validate and wrap raw nodes.
    pub fn new(grid: Vec<f64>, cdf: Vec<f64>, generator: &str) -> Result<Self, Tw2Error> {
        if grid.len() != cdf.len() || grid.len() < 2 {
            return Err(Tw2Error::RowCount {
                declared: grid.len(),
                found: cdf.len(),
            });
        }
        for i in 1..grid.len() {
            if !(grid[i] > grid[i - 1]) || !(cdf[i] > cdf[i - 1]) {
                return Err(Tw2Error::NotMonotone { row: i });
            }
        }
        let first = cdf[0];
        let last = *cdf.last().unwrap();
        if !(first > 0.0 && first < 1e-8 && last < 1.0 && last > 1.0 - 1e-8) {
            return Err(Tw2Error::Tails { first, last });
        }
        let slopes = pchip_slopes(&grid, &cdf);
        let checksum = data_checksum(&grid, &cdf);
        Ok(Self {
            grid,
            cdf,
            slopes,
            generator: generator.to_string(),
            checksum,
        })
    }

    /// Strict parser for the two-column text format.
    pub fn parse(text: &str) -> Result<Self, Tw2Error> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Tw2Error::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let header_err = |msg: &str| Tw2Error::Parse {
            line: 1,
            msg: msg.into(),
        };
        let fields = header
            .strip_prefix("# tw2-table ")
            .ok_or_else(|| header_err("missing '# tw2-table' header"))?;
        let (mut generator, mut rows, mut sha) = (None, None, None);
        for kv in fields.split_whitespace() {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| header_err("malformed header field"))?;
            match k {
                "generator" => generator = Some(v.to_string()),
                "rows" => {
                    rows = Some(
                        v.parse::<usize>()
                            .map_err(|_| header_err("bad row count"))?,
                    )
                }
                "sha256" => sha = Some(v.to_string()),
                other => return Err(header_err(&format!("unknown header key '{other}'"))),
            }
        }
        let generator = generator.ok_or_else(|| header_err("missing generator"))?;
        let rows = rows.ok_or_else(|| header_err("missing rows"))?;
        let sha = sha.ok_or_else(|| header_err("missing sha256"))?;

        let mut grid = Vec::with_capacity(rows);
        let mut cdf = Vec::with_capacity(rows);
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split_whitespace();
            let mut num = |what: &str| -> Result<f64, Tw2Error> {
                cols.next()
                    .ok_or_else(|| Tw2Error::Parse {
                        line: line_no,
                        msg: format!("missing {what} column"),
                    })?
                    .parse::<f64>()
                    .map_err(|e| Tw2Error::Parse {
                        line: line_no,
                        msg: format!("bad {what}: {e}"),
                    })
            };
            let s = num("s")?;
            let f = num("cdf")?;
            if cols.next().is_some() {
                return Err(Tw2Error::Parse {
                    line: line_no,
                    msg: "extra columns".into(),
                });
            }
            grid.push(s);
            cdf.push(f);
        }
        if grid.len() != rows {
            return Err(Tw2Error::RowCount {
                declared: rows,
                found: grid.len(),
            });
        }
        let actual = data_checksum(&grid, &cdf);
        if actual != sha {
            return Err(Tw2Error::Checksum {
                expected: sha,
                actual,
            });
        }
        Self::new(grid, cdf, &generator)
    }

    /// Serialized form accepted by [`Tw2Table::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# tw2-table generator={} rows={} sha256={}\n",
            self.generator,
            self.grid.len(),
            self.checksum
        );
        out.push_str(&data_lines(&self.grid, &self.cdf));
        out
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    pub fn checksum(&self) -> &str {
        &self.checksum
    }

    fn locate(&self, s: f64) -> usize {
        let k = self.grid.partition_point(|&g| g <= s);
        k.saturating_sub(1).min(self.grid.len() - 2)
    }

    pub fn cdf(&self, s: f64) -> f64 {
        let (a, b) = (self.grid[0], *self.grid.last().unwrap());
        if s <= a {
            return if s == a { self.cdf[0] } else { 0.0 };
        }
        if s >= b {
            return if s == b {
                *self.cdf.last().unwrap()
            } else {
                1.0
            };
        }
        let k = self.locate(s);
        hermite(&self.grid, &self.cdf, &self.slopes, k, s).clamp(0.0, 1.0)
    }

    /// Derivative of the interpolant; zero outside the table.
    pub fn pdf(&self, s: f64) -> f64 {
        if s < self.grid[0] || s > *self.grid.last().unwrap() {
            return 0.0;
        }
        let k = self.locate(s);
        hermite_derivative(&self.grid, &self.cdf, &self.slopes, k, s).max(0.0)
    }

    /// Inverse CDF by bisection on the monotone interpolant.
    pub fn quantile(&self, p: f64) -> Result<f64, Tw2Error> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Tw2Error::Domain(p));
        }
        let first = self.cdf[0];
        let last = *self.cdf.last().unwrap();
        if p <= first {
            return Ok(self.grid[0]);
        }
        if p >= last {
            return Ok(*self.grid.last().unwrap());
        }
        let k = self.cdf.partition_point(|&f| f <= p);
        let (mut lo, mut hi) = (self.grid[k - 1], self.grid[k]);
        if self.cdf[k - 1] == p {
            return Ok(lo);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `∫ s^k dF` over the table, `k ∈ {1, 2}`, from the interpolant.
    fn moment(&self, k: i32) -> f64 {
        // Gauss-Legendre 5-point on every interval of the cubic pieces.
        const X: [f64; 5] = [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ];
        const W: [f64; 5] = [
            0.236_926_885_056_189_1,
            0.478_628_670_499_366_5,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
        ];
        let mut acc = self.cdf[0] * self.grid[0].powi(k);
        for i in 0..self.grid.len() - 1 {
            let (a, b) = (self.grid[i], self.grid[i + 1]);
            let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
            for (x, w) in X.iter().zip(W) {
                let s = m + r * x;
                acc += w
                    * r
                    * s.powi(k)
                    * hermite_derivative(&self.grid, &self.cdf, &self.slopes, i, s);
            }
        }
        acc
    }

    pub fn mean(&self) -> f64 {
        self.moment(1)
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2) - m * m
    }
}

fn data_lines(grid: &[f64], cdf: &[f64]) -> String {
    let mut out = String::with_capacity(grid.len() * 48);
    for (s, f) in grid.iter().zip(cdf) {
        writeln!(out, "{s:.17e} {f:.17e}").unwrap();
    }
    out
}

fn data_checksum(grid: &[f64], cdf: &[f64]) -> String {
    let digest = Sha256::digest(data_lines(grid, cdf).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Fritsch-Carlson derivative estimates with the harmonic-mean interior
/// rule and one-sided shape-preserving end conditions.
fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    let end = |h0: f64, h1: f64, d0: f64, d1: f64| -> f64 {
        let mut v = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if v.signum() != d0.signum() {
            v = 0.0;
        } else if d0.signum() != d1.signum() && v.abs() > 3.0 * d0.abs() {
            v = 3.0 * d0;
        }
        v
    };
    d[0] = end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn hermite(x: &[f64], y: &[f64], d: &[f64], k: usize, s: f64) -> f64 {
    let h = x[k + 1] - x[k];
    let t = (s - x[k]) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y[k]
        + (t3 - 2.0 * t2 + t) * h * d[k]
        + (-2.0 * t3 + 3.0 * t2) * y[k + 1]
        + (t3 - t2) * h * d[k + 1]
}

fn hermite_derivative(x: &[f64], y: &[f64], d: &[f64], k: usize, s: f64) -> f64 {
    let h = x[k + 1] - x[k];
    let t = (s - x[k]) / h;
    let t2 = t * t;
    (6.0 * t2 - 6.0 * t) / h * y[k]
        + (3.0 * t2 - 4.0 * t + 1.0) * d[k]
        + (-6.0 * t2 + 6.0 * t) / h * y[k + 1]
        + (3.0 * t2 - 2.0 * t) * d[k + 1]
}

const SHIPPED_TABLE: &str = include_str!("../../data/tw2_table.txt");

/// The shipped table, parsed and validated on first use.
pub fn tw2() -> &'static Tw2Table {
    static TABLE: OnceLock<Tw2Table> = OnceLock::new();
    TABLE.get_or_init(|| Tw2Table::parse(SHIPPED_TABLE).expect("shipped TW2 table is valid"))
}

pub fn tw2_cdf(s: f64) -> f64 {
    tw2().cdf(s)
}

pub fn tw2_quantile(p: f64) -> Result<f64, Tw2Error> {
    tw2().quantile(p)
}

pub fn tw2_pdf(s: f64) -> f64 {
    tw2().pdf(s)
}

/// Centering and scaling that send the top eigenvalue of a white complex
/// Wishart sample covariance (`N` antennas, ratio `c`) to F2.
pub fn wishart_edge_scaling(big_n: usize, c: f64) -> (f64, f64) {
    let center = (1.0 + c.sqrt()).powi(2);
    let scale = (big_n as f64).powf(-2.0 / 3.0) * (1.0 + c.sqrt()).powf(4.0 / 3.0) * c.sqrt();
    (center, scale)
}

/// `N^{2/3}(λ − (1+√c)²) / ((1+√c)^{4/3} √c)`.
pub fn normalize_edge(lambda: f64, big_n: usize, c: f64) -> f64 {
    let (center, scale) = wishart_edge_scaling(big_n, c);
    (lambda - center) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_invariants() {
        let t = tw2();
        assert_eq!(t.generator(), GENERATOR_ID);
        assert_eq!(t.grid().len(), 2049);
        assert!(tw2_cdf(-10.0) < 1e-8);
        assert!((tw2_cdf(6.0) - 1.0).abs() < 1e-8);
        assert_eq!(tw2_cdf(-11.0), 0.0);
        assert_eq!(tw2_cdf(7.0), 1.0);
    }

    #[test]
    fn shipped_table_moments_match_literature() {
        // Mean −1.7710868074, variance 0.8131947928.
        let t = tw2();
        assert!((t.mean() + 1.771_086_807_4).abs() < 1e-6, "{}", t.mean());
        assert!(
            (t.variance() - 0.813_194_792_8).abs() < 1e-5,
            "{}",
            t.variance()
        );
    }

    #[test]
    fn quantile_round_trip_on_nodes() {
        let t = tw2();
        for k in (1..t.grid().len() - 1).step_by(37) {
            let s0 = t.grid()[k];
            let back = t.quantile(t.cdf_values()[k]).unwrap();
            assert!((back - s0).abs() < 1e-9, "{s0} -> {back}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for p in [1e-4, 0.01, 0.1, 0.5, 0.9, 0.95, 0.99, 0.9999] {
            let q = tw2_quantile(p).unwrap();
            assert!((tw2_cdf(q) - p).abs() < 1e-6, "p = {p}");
        }
        assert!(matches!(tw2_quantile(0.0), Err(Tw2Error::Domain(_))));
        assert!(matches!(tw2_quantile(1.0), Err(Tw2Error::Domain(_))));
    }

    #[test]
    fn known_quantiles() {
        // Reference values of F2⁻¹ from high-precision Painlevé solutions.
        for (p, q) in [
            (0.5, -1.804_9),
            (0.9, -0.596_8),
            (0.95, -0.232_5),
            (0.99, 0.477_6),
        ] {
            let got = tw2_quantile(p).unwrap();
            assert!((got - q).abs() < 2e-3, "p = {p}: {got}");
        }
    }

    #[test]
    fn round_trip_text_and_checksum() {
        let text = tw2().to_text();
        let again = Tw2Table::parse(&text).unwrap();
        assert_eq!(&again, tw2());
        let corrupted = text.replacen("e-1", "e-2", 1);
        assert!(Tw2Table::parse(&corrupted).is_err());
    }

    #[test]
    fn rejects_non_monotone_table() {
        let grid = vec![-10.0, 0.0, 1.0, 6.0];
        let cdf = vec![1e-12, 0.5, 0.4, 1.0 - 1e-12];
        assert_eq!(
            Tw2Table::new(grid, cdf, "x"),
            Err(Tw2Error::NotMonotone { row: 2 })
        );
    }

    #[test]
    fn regeneration_reproduces_shipped_table() {
        let fresh = generate_tw2_table(2048).unwrap();
        assert_eq!(fresh.checksum(), tw2().checksum());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let bad = "# tw2-table generator=x rows=2 sha256=00\n-1.0 0.1\nabc 0.2\n";
        assert!(matches!(
            Tw2Table::parse(bad),
            Err(Tw2Error::Parse { line: 3, .. })
        ));
    }
}
