//! Average marginal component effects (AMCEs) from randomized-profile
//! responses.
//!
//! The outcome is regressed by OLS on an intercept plus one dummy per
//! non-baseline level of every attribute. Coefficients are the AMCEs.
//! Standard errors are either classical (`σ² (X'X)⁻¹` with
//! `σ² = RSS / (n − k)`) or clustered by respondent with the CR1 small-sample
//! factor `G/(G−1) · (n−1)/(n−k)`.

mod io;
pub mod synthetic;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{load_responses, read_responses, write_estimates, write_responses};

/// Pivots smaller than this times the largest diagonal entry of `X'X` count
/// as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ConjointError {
    #[error("failed to access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed response file at line {line}: {reason}")]
    Malformed { line: u64, reason: String },
    #[error("malformed baseline spec `{0}` (expected attribute=level,…)")]
    BadBaselineSpec(String),
    #[error("baseline given for unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("{}", match .level {
        Some(level) => format!("baseline level `{level}` of attribute `{attribute}` does not occur in the data"),
        None => format!("no baseline given for attribute `{attribute}`"),
    })]
    MissingBaseline { attribute: String, level: Option<String> },
    #[error("design matrix is rank deficient: {0}")]
    RankDeficient(String),
    #[error("{n} responses are too few for {k} parameters")]
    InsufficientData { n: usize, k: usize },
    #[error("clustered standard errors need at least 2 respondents, found {0}")]
    InsufficientClusters(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeMode {
    Classical,
    Cluster,
}

impl FromStr for SeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classical" => Ok(SeMode::Classical),
            "cluster" => Ok(SeMode::Cluster),
            _ => Err(format!("unknown SE mode `{s}` (expected classical or cluster)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjointResponse {
    pub respondent_id: String,
    pub task_index: u32,
    pub attributes: BTreeMap<String, String>,
    pub outcome: f64,
}

/// Responses plus the attribute names in file-column order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResponseSet {
    pub attributes: Vec<String>,
    pub responses: Vec<ConjointResponse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmceEstimate {
    pub attribute: String,
    pub level: String,
    pub estimate: f64,
    /// `None` for baseline levels.
    pub se: Option<f64>,
    pub z: Option<f64>,
    pub p: Option<f64>,
    pub is_baseline: bool,
}

/// Parses `attr=level,attr=level`.
pub fn parse_baselines(spec: &str) -> Result<BTreeMap<String, String>, ConjointError> {
    let mut out = BTreeMap::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (attr, level) = part
            .split_once('=')
            .filter(|(a, l)| !a.trim().is_empty() && !l.trim().is_empty())
            .ok_or_else(|| ConjointError::BadBaselineSpec(spec.to_string()))?;
        if out.insert(attr.trim().to_string(), level.trim().to_string()).is_some() {
            return Err(ConjointError::BadBaselineSpec(spec.to_string()));
        }
    }
    if out.is_empty() {
        return Err(ConjointError::BadBaselineSpec(spec.to_string()));
    }
    Ok(out)
}

/// Two-sided normal tail probability of `z`.
pub fn two_sided_p(z: f64) -> f64 {
    libm::erfc(z.abs() / std::f64::consts::SQRT_2)
}

struct Column {
    attribute: usize,
    level: String,
}

pub fn estimate_amce(
    set: &ResponseSet,
    baselines: &BTreeMap<String, String>,
    se_mode: SeMode,
) -> Result<Vec<AmceEstimate>, ConjointError> {
    if let Some(unknown) = baselines.keys().find(|a| !set.attributes.contains(a)) {
        return Err(ConjointError::UnknownAttribute(unknown.clone()));
    }

    let mut columns = Vec::new();
    let mut base_levels = Vec::new();
    for (ai, attribute) in set.attributes.iter().enumerate() {
        let levels: BTreeSet<&str> = set
            .responses
            .iter()
            .map(|r| r.attributes[attribute].as_str())
            .collect();
        let base = baselines.get(attribute).ok_or_else(|| ConjointError::MissingBaseline {
            attribute: attribute.clone(),
            level: None,
        })?;
        if !levels.contains(base.as_str()) {
            return Err(ConjointError::MissingBaseline {
                attribute: attribute.clone(),
                level: Some(base.clone()),
            });
        }
        if levels.len() < 2 {
            return Err(ConjointError::RankDeficient(format!(
                "attribute `{attribute}` takes a single level"
            )));
        }
        for level in levels.into_iter().filter(|l| *l != base) {
            columns.push(Column {
                attribute: ai,
                level: level.to_string(),
            });
        }
        base_levels.push(base.clone());
    }

    let n = set.responses.len();
    let k = columns.len() + 1;
    if n <= k {
        return Err(ConjointError::InsufficientData { n, k });
    }

    let rows: Vec<Vec<f64>> = set
        .responses
        .iter()
        .map(|r| {
            let mut x = Vec::with_capacity(k);
            x.push(1.0);
            for c in &columns {
                let value = &r.attributes[&set.attributes[c.attribute]];
                x.push(if *value == c.level { 1.0 } else { 0.0 });
            }
            x
        })
        .collect();
    // Centering on the first outcome only moves the intercept, and makes a
    // constant outcome give exact zeros.
    let offset = set.responses[0].outcome;
    let y: Vec<f64> = set.responses.iter().map(|r| r.outcome - offset).collect();

    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for (x, yi) in rows.iter().zip(&y) {
        for i in 0..k {
            if x[i] == 0.0 {
                continue;
            }
            xty[i] += x[i] * yi;
            for j in 0..k {
                xtx[i][j] += x[i] * x[j];
            }
        }
    }
    let inv = invert(&xtx, |col| describe(col, &columns, set))?;
    let beta: Vec<f64> = inv.iter().map(|row| dot(row, &xty)).collect();
    let residuals: Vec<f64> = rows.iter().zip(&y).map(|(x, yi)| yi - dot(x, &beta)).collect();

    let covariance = match se_mode {
        SeMode::Classical => {
            let rss: f64 = residuals.iter().map(|e| e * e).sum();
            let sigma2 = rss / (n - k) as f64;
            inv.iter()
                .map(|row| row.iter().map(|v| v * sigma2).collect())
                .collect::<Vec<Vec<f64>>>()
        }
        SeMode::Cluster => {
            let mut scores: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
            for ((r, x), e) in set.responses.iter().zip(&rows).zip(&residuals) {
                let u = scores.entry(r.respondent_id.as_str()).or_insert_with(|| vec![0.0; k]);
                u.iter_mut().zip(x).for_each(|(ui, xi)| *ui += xi * e);
            }
            let g = scores.len();
            if g < 2 {
                return Err(ConjointError::InsufficientClusters(g));
            }
            let mut meat = vec![vec![0.0; k]; k];
            for u in scores.values() {
                for i in 0..k {
                    for j in 0..k {
                        meat[i][j] += u[i] * u[j];
                    }
                }
            }
            let factor = (g as f64 / (g - 1) as f64) * ((n - 1) as f64 / (n - k) as f64);
            let sandwich = matmul(&matmul(&inv, &meat), &inv);
            sandwich
                .into_iter()
                .map(|row| row.into_iter().map(|v| v * factor).collect())
                .collect()
        }
    };

    let mut out = Vec::with_capacity(k - 1 + set.attributes.len());
    for (ai, attribute) in set.attributes.iter().enumerate() {
        out.push(AmceEstimate {
            attribute: attribute.clone(),
            level: base_levels[ai].clone(),
            estimate: 0.0,
            se: None,
            z: None,
            p: None,
            is_baseline: true,
        });
        for (ci, c) in columns.iter().enumerate().filter(|(_, c)| c.attribute == ai) {
            let j = ci + 1;
            let estimate = beta[j];
            let se = covariance[j][j].max(0.0).sqrt();
            let z = if se > 0.0 {
                estimate / se
            } else if estimate == 0.0 {
                0.0
            } else {
                estimate.signum() * f64::INFINITY
            };
            out.push(AmceEstimate {
                attribute: attribute.clone(),
                level: c.level.clone(),
                estimate,
                se: Some(se),
                z: Some(z),
                p: Some(two_sided_p(z)),
                is_baseline: false,
            });
        }
    }
    Ok(out)
}

fn describe(col: usize, columns: &[Column], set: &ResponseSet) -> String {
    match col.checked_sub(1).and_then(|c| columns.get(c)) {
        Some(c) => format!(
            "level `{}` of `{}` is collinear with other terms",
            c.level, set.attributes[c.attribute]
        ),
        None => "intercept is collinear with other terms".into(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn matmul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = b.len();
    a.iter()
        .map(|row| (0..b[0].len()).map(|j| (0..k).map(|l| row[l] * b[l][j]).sum()).collect())
        .collect()
}

/// Gauss–Jordan inverse with partial pivoting.
fn invert(a: &[Vec<f64>], describe: impl Fn(usize) -> String) -> Result<Vec<Vec<f64>>, ConjointError> {
    let k = a.len();
    let max_diag = (0..k).map(|i| a[i][i].abs()).fold(0.0, f64::max);
    let tolerance = PIVOT_TOLERANCE * max_diag;
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..k).map(|i| (0..k).map(|j| f64::from(u8::from(i == j))).collect()).collect();

    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&r, &s| m[r][col].abs().total_cmp(&m[s][col].abs()))
            .expect("non-empty range");
        if m[pivot][col].abs() <= tolerance {
            return Err(ConjointError::RankDeficient(describe(col)));
        }
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let p = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= p);
        inv[col].iter_mut().for_each(|v| *v /= p);
        for r in 0..k {
            if r == col || m[r][col] == 0.0 {
                continue;
            }
            let f = m[r][col];
            for c in 0..k {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    Ok(inv)
}

/// Fixed-width table for terminal output. Baselines are marked `(base)`.
pub fn format_table(estimates: &[AmceEstimate]) -> String {
    let attr_w = estimates.iter().map(|e| e.attribute.len()).max().unwrap_or(0).max(9);
    let level_w = estimates.iter().map(|e| e.level.len()).max().unwrap_or(0).max(5) + 7;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:attr_w$}  {:level_w$}  {:>9}  {:>8}  {:>8}  {:>8}",
        "attribute", "level", "estimate", "se", "z", "p"
    );
    let num = |v: Option<f64>, prec: usize| v.map_or_else(|| "-".to_string(), |v| format!("{v:.prec$}"));
    for e in estimates {
        let level = if e.is_baseline {
            format!("{} (base)", e.level)
        } else {
            e.level.clone()
        };
        let _ = writeln!(
            out,
            "{:attr_w$}  {:level_w$}  {:>9.3}  {:>8}  {:>8}  {:>8}",
            e.attribute,
            level,
            e.estimate,
            num(e.se, 3),
            num(e.z, 2),
            num(e.p, 4)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn response(id: &str, task: u32, levels: &[(&str, &str)], outcome: f64) -> ConjointResponse {
        ConjointResponse {
            respondent_id: id.into(),
            task_index: task,
            attributes: levels.iter().map(|(a, l)| (a.to_string(), l.to_string())).collect(),
            outcome,
        }
    }

    fn one_attribute(data: &[(&str, &str, f64)]) -> ResponseSet {
        ResponseSet {
            attributes: vec!["overview".into()],
            responses: data
                .iter()
                .enumerate()
                .map(|(i, (id, level, y))| response(id, i as u32, &[("overview", level)], *y))
                .collect(),
        }
    }

    fn base(level: &str) -> BTreeMap<String, String> {
        BTreeMap::from([("overview".to_string(), level.to_string())])
    }

    #[test]
    fn difference_of_means_and_classical_se() {
        let set = one_attribute(&[
            ("r1", "a", 1.0),
            ("r2", "a", 3.0),
            ("r3", "b", 4.0),
            ("r4", "b", 8.0),
        ]);
        let est = estimate_amce(&set, &base("a"), SeMode::Classical).unwrap();
        assert_eq!(est.len(), 2);
        assert!(est[0].is_baseline && est[0].se.is_none());
        assert!((est[1].estimate - 4.0).abs() < 1e-12);
        // RSS = 2 + 8 = 10, n - k = 2, var = 5 * (1/2 + 1/2)
        assert!((est[1].se.unwrap() - 5f64.sqrt()).abs() < 1e-12);
        let z = 4.0 / 5f64.sqrt();
        assert!((est[1].p.unwrap() - two_sided_p(z)).abs() < 1e-15);
    }

    #[test]
    fn constant_outcome_gives_exact_zeros() {
        let set = one_attribute(&[("r1", "a", 7.0), ("r2", "b", 7.0), ("r3", "a", 7.0), ("r4", "b", 7.0)]);
        for mode in [SeMode::Classical, SeMode::Cluster] {
            let est = estimate_amce(&set, &base("a"), mode).unwrap();
            assert_eq!(est[1].estimate, 0.0);
            assert_eq!(est[1].se, Some(0.0));
            assert_eq!(est[1].z, Some(0.0));
            assert_eq!(est[1].p, Some(1.0));
        }
    }

    #[test]
    fn baseline_errors() {
        let set = one_attribute(&[("r1", "a", 1.0), ("r2", "b", 2.0), ("r3", "a", 1.5)]);
        assert!(matches!(
            estimate_amce(&set, &base("zzz"), SeMode::Classical),
            Err(ConjointError::MissingBaseline { level: Some(_), .. })
        ));
        assert!(matches!(
            estimate_amce(&set, &BTreeMap::new(), SeMode::Classical),
            Err(ConjointError::MissingBaseline { level: None, .. })
        ));
        let extra = BTreeMap::from([
            ("overview".to_string(), "a".to_string()),
            ("colour".to_string(), "red".to_string()),
        ]);
        assert!(matches!(
            estimate_amce(&set, &extra, SeMode::Classical),
            Err(ConjointError::UnknownAttribute(_))
        ));
    }

    #[test]
    fn collinear_designs_are_rank_deficient() {
        let single = one_attribute(&[("r1", "a", 1.0), ("r2", "a", 2.0), ("r3", "a", 3.0)]);
        assert!(matches!(
            estimate_amce(&single, &base("a"), SeMode::Classical),
            Err(ConjointError::RankDeficient(_))
        ));
        // topic duplicates overview exactly
        let set = ResponseSet {
            attributes: vec!["overview".into(), "topic".into()],
            responses: (0..6)
                .map(|i| {
                    let (o, t) = if i % 2 == 0 { ("a", "x") } else { ("b", "y") };
                    response(&format!("r{i}"), 0, &[("overview", o), ("topic", t)], i as f64)
                })
                .collect(),
        };
        let baselines = BTreeMap::from([
            ("overview".to_string(), "a".to_string()),
            ("topic".to_string(), "x".to_string()),
        ]);
        assert!(matches!(
            estimate_amce(&set, &baselines, SeMode::Classical),
            Err(ConjointError::RankDeficient(_))
        ));
    }

    #[test]
    fn too_little_data() {
        let set = one_attribute(&[("r1", "a", 1.0), ("r2", "b", 2.0)]);
        assert!(matches!(
            estimate_amce(&set, &base("a"), SeMode::Classical),
            Err(ConjointError::InsufficientData { n: 2, k: 2 })
        ));
        let set = one_attribute(&[("r1", "a", 1.0), ("r1", "b", 2.0), ("r1", "a", 2.0)]);
        assert!(matches!(
            estimate_amce(&set, &base("a"), SeMode::Cluster),
            Err(ConjointError::InsufficientClusters(1))
        ));
    }

    #[test]
    fn cluster_se_matches_hand_computation() {
        // Two respondents, two tasks each; x = [1, d].
        let set = one_attribute(&[("r1", "a", 1.0), ("r1", "b", 4.0), ("r2", "a", 3.0), ("r2", "b", 4.0)]);
        let est = estimate_amce(&set, &base("a"), SeMode::Cluster).unwrap();
        // y - y0 = (0, 3, 2, 3), beta = (1, 2), residuals (-1, 0, 1, 0)
        // scores: r1 = (-1, 0), r2 = (1, 0); meat = [[2, 0], [0, 0]]
        // (X'X)^-1 = [[0.5, -0.5], [-0.5, 1]]; V = inv meat inv → V[1][1] = 0.5
        // factor = 2/1 * 3/2 = 3
        assert!((est[1].estimate - 2.0).abs() < 1e-12);
        assert!((est[1].se.unwrap() - 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn baseline_spec_parsing() {
        let b = parse_baselines("overview=plain_none, topic=bushfire").unwrap();
        assert_eq!(b["topic"], "bushfire");
        for bad in ["", "overview", "overview=", "=x", "a=b,a=c"] {
            assert!(parse_baselines(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn p_values() {
        assert_eq!(two_sided_p(0.0), 1.0);
        assert!((two_sided_p(1.959963984540054) - 0.05).abs() < 1e-12);
        assert_eq!(two_sided_p(f64::INFINITY), 0.0);
    }

    #[test]
    fn table_marks_baselines() {
        let set = one_attribute(&[("r1", "a", 1.0), ("r2", "a", 3.0), ("r3", "b", 4.0), ("r4", "b", 8.0)]);
        let table = format_table(&estimate_amce(&set, &base("a"), SeMode::Classical).unwrap());
        assert!(table.contains("a (base)"));
        assert_eq!(table.lines().count(), 3);
    }
}
