//! Tabulated `Im eps(w)` with declared power-law tails.
//!
//! Between samples the data is interpolated linearly in `log w`-`log Im eps`
//! (linearly in `w` where a sample is zero). Outside the sampled range the
//! declared tail laws take over, anchored to the first/last sample.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Behaviour of `Im eps` outside the sampled range: `Im eps ~ w^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tail", rename_all = "snake_case")]
pub enum TailLaw {
    Zero,
    PowerLaw { exponent: f64 },
}

impl TailLaw {
    /// `Im eps ~ 1/w`, the dc-conductivity form at low frequency.
    pub fn conductivity() -> Self {
        TailLaw::PowerLaw { exponent: 1.0 }
    }

    /// `Im eps ~ 1/w^3`, the free-carrier form at high frequency.
    pub fn drude() -> Self {
        TailLaw::PowerLaw { exponent: 3.0 }
    }

    fn exponent(&self) -> Option<f64> {
        match self {
            TailLaw::Zero => None,
            TailLaw::PowerLaw { exponent } => Some(*exponent),
        }
    }
}

impl fmt::Display for TailLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailLaw::Zero => write!(f, "zero"),
            TailLaw::PowerLaw { exponent } => write!(f, "power:{exponent}"),
        }
    }
}

impl FromStr for TailLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "zero" => Ok(TailLaw::Zero),
            "conductivity" => Ok(TailLaw::conductivity()),
            "drude" => Ok(TailLaw::drude()),
            other => {
                let exponent = other
                    .strip_prefix("power:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| p.is_finite())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "unknown tail law '{other}' (expected zero, conductivity, drude or power:<p>)"
                        ))
                    })?;
                Ok(TailLaw::PowerLaw { exponent })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    omega: Vec<f64>,
    im_eps: Vec<f64>,
    pub low_tail: TailLaw,
    pub high_tail: TailLaw,
    /// Optional plasma frequency used as the sum-rule reference.
    #[serde(default)]
    pub plasma_frequency: Option<f64>,
}

impl Table {
    pub fn new(omega: Vec<f64>, im_eps: Vec<f64>, low_tail: TailLaw, high_tail: TailLaw) -> Result<Self> {
        let t = Table {
            omega,
            im_eps,
            low_tail,
            high_tail,
            plasma_frequency: None,
        };
        t.validate()?;
        Ok(t)
    }

    /// Sample `im(w)` on a log grid of `n` points spanning `[w_min, w_max]`.
    pub fn sample<F: Fn(f64) -> f64>(
        im: F,
        w_min: f64,
        w_max: f64,
        n: usize,
        low_tail: TailLaw,
        high_tail: TailLaw,
    ) -> Result<Self> {
        if n < 2 || !(w_min > 0.0 && w_max > w_min) {
            return Err(Error::InvalidParameter("bad sampling grid".into()));
        }
        let ratio = (w_max / w_min).ln();
        let omega: Vec<f64> = (0..n)
            .map(|i| w_min * (ratio * i as f64 / (n - 1) as f64).exp())
            .collect();
        let im_eps = omega.iter().map(|&w| im(w)).collect();
        Table::new(omega, im_eps, low_tail, high_tail)
    }

    pub fn with_plasma_frequency(mut self, wp: f64) -> Self {
        self.plasma_frequency = Some(wp);
        self
    }

    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn im_eps_samples(&self) -> &[f64] {
        &self.im_eps
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega.len() != self.im_eps.len() {
            return Err(Error::InvalidParameter("column lengths differ".into()));
        }
        if self.omega.len() < 2 {
            return Err(Error::InvalidParameter("table needs at least two samples".into()));
        }
        for (i, (&w, &y)) in self.omega.iter().zip(&self.im_eps).enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidParameter(format!("sample {i}: omega must be positive")));
            }
            if !(y >= 0.0 && y.is_finite()) {
                return Err(Error::InvalidParameter(format!("sample {i}: Im eps must be >= 0")));
            }
            if i > 0 && w <= self.omega[i - 1] {
                return Err(Error::InvalidParameter(format!(
                    "sample {i}: omega must be strictly increasing"
                )));
            }
        }
        if let Some(p) = self.low_tail.exponent() {
            // Either a conductor (1/w) or a dielectric whose absorption vanishes at w = 0.
            if !(p == 1.0 || p < 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "low-frequency tail w^-{p}: exponent must be 1 or negative"
                )));
            }
        }
        if let Some(wp) = self.plasma_frequency {
            if !(wp > 0.0) {
                return Err(Error::InvalidParameter("plasma frequency must be positive".into()));
            }
        }
        Ok(())
    }

    /// Parse `omega,im_eps` CSV. Line numbers in errors are 1-based and count
    /// the header.
    pub fn from_csv<R: BufRead>(reader: R, low_tail: TailLaw, high_tail: TailLaw) -> Result<Self> {
        let mut lines = reader.lines().enumerate();
        let header = loop {
            match lines.next() {
                None => {
                    return Err(Error::Table {
                        line: 1,
                        message: "empty file; expected header 'omega,im_eps'".into(),
                    })
                }
                Some((i, line)) => {
                    let line = line.map_err(|e| Error::Table {
                        line: i + 1,
                        message: e.to_string(),
                    })?;
                    if !line.trim().is_empty() {
                        break (i + 1, line);
                    }
                }
            }
        };
        let cols: Vec<&str> = header.1.split(',').map(str::trim).collect();
        if cols != ["omega", "im_eps"] {
            return Err(Error::Table {
                line: header.0,
                message: format!("expected header 'omega,im_eps', found '{}'", header.1.trim()),
            });
        }
        let mut omega = Vec::new();
        let mut im_eps = Vec::new();
        let mut last_line = header.0;
        for (i, line) in lines {
            let n = i + 1;
            last_line = n;
            let line = line.map_err(|e| Error::Table {
                line: n,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 2 {
                return Err(Error::Table {
                    line: n,
                    message: format!("expected 2 fields, found {}", fields.len()),
                });
            }
            let parse = |s: &str, what: &str| {
                s.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| Error::Table {
                    line: n,
                    message: format!("cannot parse {what} '{s}'"),
                })
            };
            let w = parse(fields[0], "omega")?;
            let y = parse(fields[1], "im_eps")?;
            if w <= 0.0 {
                return Err(Error::Table {
                    line: n,
                    message: format!("omega must be positive, got {w}"),
                });
            }
            if let Some(&prev) = omega.last() {
                if w <= prev {
                    return Err(Error::Table {
                        line: n,
                        message: format!("omega {w} does not increase (previous {prev})"),
                    });
                }
            }
            if y < 0.0 {
                return Err(Error::Table {
                    line: n,
                    message: format!("Im eps must be non-negative, got {y}"),
                });
            }
            omega.push(w);
            im_eps.push(y);
        }
        if omega.len() < 2 {
            return Err(Error::Table {
                line: last_line,
                message: format!("need at least two data rows, found {}", omega.len()),
            });
        }
        Table::new(omega, im_eps, low_tail, high_tail)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,im_eps\n");
        for (w, y) in self.omega.iter().zip(&self.im_eps) {
            out.push_str(&format!("{w:.16e},{y:.16e}\n"));
        }
        out
    }

    /// Interpolated `Im eps(w)` for `w > 0`.
    pub fn im_eps(&self, w: f64) -> f64 {
        let n = self.omega.len();
        let (w0, wn) = (self.omega[0], self.omega[n - 1]);
        if w < w0 {
            return tail_value(self.low_tail, w0, self.im_eps[0], w);
        }
        if w > wn {
            return tail_value(self.high_tail, wn, self.im_eps[n - 1], w);
        }
        let j = self.omega.partition_point(|&x| x <= w).clamp(1, n - 1);
        let (xa, xb) = (self.omega[j - 1], self.omega[j]);
        let (ya, yb) = (self.im_eps[j - 1], self.im_eps[j]);
        if ya > 0.0 && yb > 0.0 {
            let t = (w / xa).ln() / (xb / xa).ln();
            ya * (yb / ya).powf(t)
        } else {
            ya + (yb - ya) * (w - xa) / (xb - xa)
        }
    }

    /// `int_0^inf Im eps(x) g(x) dx` over the table and both tails.
    pub(crate) fn integrate_weighted<G: Fn(f64) -> f64>(&self, g: G, tol: Tolerance) -> Result<f64> {
        let mut points = Vec::with_capacity(self.omega.len() + 1);
        points.push(0.0);
        points.extend_from_slice(&self.omega);
        let scale = *self.omega.last().unwrap();
        let q = quadrature::integrate_to_infinity(|x| self.im_eps(x) * g(x), &points, scale, tol)?;
        Ok(q.value)
    }

    /// `eps(i zeta) - 1` from the real-axis data.
    pub fn chi_imag(&self, zeta: f64) -> Result<f64> {
        if let Some(p) = self.high_tail.exponent() {
            if p < 1.0 {
                return Err(Error::non_convergence(
                    "imaginary-axis transform",
                    format!("high-frequency tail w^-{p} decays slower than 1/w"),
                ));
            }
        }
        if zeta == 0.0 && self.low_tail.exponent() == Some(1.0) {
            return Err(Error::PoleAtZero(super::PoleOrder::First));
        }
        let z2 = zeta * zeta;
        let v = self.integrate_weighted(|x| x / (x * x + z2), Tolerance::new(1e-15, 1e-12))?;
        Ok(2.0 / std::f64::consts::PI * v)
    }

    /// The sample frequency at which `w Im eps(w)` peaks.
    pub fn peak_frequency(&self) -> f64 {
        self.omega
            .iter()
            .zip(&self.im_eps)
            .max_by(|a, b| (a.0 * a.1).total_cmp(&(b.0 * b.1)))
            .map(|(w, _)| *w)
            .unwrap()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.im_eps.iter().all(|&y| y == 0.0)
    }
}

fn tail_value(law: TailLaw, anchor_w: f64, anchor_y: f64, w: f64) -> f64 {
    match law {
        TailLaw::Zero => 0.0,
        TailLaw::PowerLaw { exponent } => anchor_y * (w / anchor_w).powf(-exponent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<Table> {
        Table::from_csv(Cursor::new(text), TailLaw::Zero, TailLaw::drude())
    }

    #[test]
    fn well_formed_table_parses() {
        let t = parse("omega,im_eps\n0.1,2.0\n1.0,0.5\n10,0.001\n").unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.omega()[2], 10.0);
    }

    #[test]
    fn negative_value_cites_line() {
        let mut text = String::from("omega,im_eps\n");
        for i in 1..=20 {
            let y = if i == 16 { -0.1 } else { 1.0 };
            text.push_str(&format!("{},{}\n", i as f64 * 0.1, y));
        }
        // header is line 1, sample i sits on line i + 1
        match parse(&text) {
            Err(Error::Table { line, message }) => {
                assert_eq!(line, 17);
                assert!(message.contains("non-negative"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_monotone_and_garbage_rejected() {
        assert!(matches!(
            parse("omega,im_eps\n1,1\n0.5,1\n"),
            Err(Error::Table { line: 3, .. })
        ));
        assert!(matches!(
            parse("omega,im_eps\n1,abc\n"),
            Err(Error::Table { line: 2, .. })
        ));
        assert!(matches!(parse("w,e\n1,1\n"), Err(Error::Table { line: 1, .. })));
    }

    #[test]
    fn empty_file_rejected() {
        assert!(matches!(parse(""), Err(Error::Table { line: 1, .. })));
        assert!(matches!(parse("omega,im_eps\n"), Err(Error::Table { .. })));
    }

    #[test]
    fn interpolation_is_exact_for_power_laws() {
        let t = Table::sample(|w| 3.0 * w.powf(-1.5), 0.1, 10.0, 5, TailLaw::Zero, TailLaw::Zero).unwrap();
        for &w in &[0.13, 0.7, 2.2, 9.1] {
            assert!((t.im_eps(w) - 3.0 * w.powf(-1.5)).abs() < 1e-12 * t.im_eps(w));
        }
        assert_eq!(t.im_eps(11.0), 0.0);
    }

    #[test]
    fn tail_law_parsing() {
        assert_eq!("zero".parse::<TailLaw>().unwrap(), TailLaw::Zero);
        assert_eq!("drude".parse::<TailLaw>().unwrap(), TailLaw::drude());
        assert_eq!(
            "power:2.5".parse::<TailLaw>().unwrap(),
            TailLaw::PowerLaw { exponent: 2.5 }
        );
        assert!("cubic".parse::<TailLaw>().is_err());
    }

    #[test]
    fn slow_high_tail_does_not_converge() {
        let t = Table::sample(|_| 1.0, 0.1, 10.0, 10, TailLaw::Zero, TailLaw::PowerLaw { exponent: 0.5 }).unwrap();
        assert!(matches!(t.chi_imag(1.0), Err(Error::NonConvergence { .. })));
    }
}
