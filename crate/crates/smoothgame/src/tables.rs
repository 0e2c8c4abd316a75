//! Parameter sweeps emitted as CSV for plotting.

use std::io::Write;

use smoothgame_core::adversaries::{EpsStep, FamilyKind};
use smoothgame_core::classes::family::{f_n_eps, g_n_constant, g_n_eps};
use smoothgame_core::engine::{radius_loss_factor, run_game, GameConfig, Scenario};
use smoothgame_core::learners::{LinintPrime, ZeroLearner};

use crate::criteria::{forced_family_loss, s1_family_loss, scaling_deviation};
use crate::error::{CliError, CliResult};

/// A CSV table with `#` comment lines documenting its columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, out: &mut W, extra_comments: &[String]) -> CliResult<()> {
        for line in self.comments.iter().chain(extra_comments) {
            writeln!(out, "# {line}")?;
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.header)?;
        for row in &self.rows {
            writer.write_record(row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

pub struct TableSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub default_grid: &'static str,
}

pub const TABLES: &[TableSpec] = &[
    TableSpec {
        name: "fn_ratio",
        about: "F_{n,eps} free-guess vs radius-restricted losses over n",
        default_grid: "2,4,8,16,32,64",
    },
    TableSpec {
        name: "gn_ratio",
        about: "G_{n,eps} ratio lower bound over p at fixed n",
        default_grid: "2,8,32,128",
    },
    TableSpec {
        name: "eps_step",
        about: "eps-step loss growth over N for p < q",
        default_grid: "100,1000,10000",
    },
    TableSpec {
        name: "scaling",
        about: "coupled radius-R loss ratios over R",
        default_grid: "0.5,1,2,4",
    },
];

/// Knobs shared by the tables; each table reads the ones it needs.
#[derive(Debug, Clone)]
pub struct TableOptions {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub eps: Option<f64>,
    pub n: Option<usize>,
}

/// Comma-separated grid; the empty string is the empty grid.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::usage(format!("grid value `{s}` is not a number")))
        })
        .collect()
}

fn counts(grid: &[f64], what: &str) -> CliResult<Vec<usize>> {
    grid.iter()
        .map(|&v| {
            if v >= 1.0 && v.fract() == 0.0 && v <= 1e9 {
                Ok(v as usize)
            } else {
                Err(CliError::usage(format!("{what} grid needs positive integers, got {v}")))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnRatioRow {
    pub n: usize,
    pub log2_n: f64,
    pub forced_s2: f64,
    pub s1_bound: f64,
    pub s1_measured: f64,
    pub ratio_lower: f64,
}

/// For each `n`: the smallest free-guess loss the script forces over the
/// baseline learners, the radius-restricted bound `1 + (n eps)^p`, the
/// largest radius-restricted midpoint loss seen over 50 random walks, and
/// `ratio_lower = forced_s2 / s1_bound`.
pub fn fn_ratio_rows(ns: &[usize], eps: f64, p: f64) -> CliResult<Vec<FnRatioRow>> {
    ns.iter()
        .map(|&n| {
            let k = f64::from(n.trailing_zeros());
            let (forced_s2, _) = forced_family_loss(&FamilyKind::FNEps { n, eps }, p)?;
            let (s1_measured, _) = s1_family_loss(&f_n_eps(n, eps)?, p, 4 * k as u64, 50)?;
            let s1_bound = 1.0 + (n as f64 * eps).powf(p);
            Ok(FnRatioRow {
                n,
                log2_n: k,
                forced_s2,
                s1_bound,
                s1_measured,
                ratio_lower: forced_s2 / s1_bound,
            })
        })
        .collect()
}

fn fn_ratio(grid: &[f64], opts: &TableOptions) -> CliResult<Table> {
    let (eps, p) = (opts.eps.unwrap_or(1e-4), opts.p.unwrap_or(1.0));
    let rows = fn_ratio_rows(&counts(grid, "n")?, eps, p)?;
    Ok(Table {
        comments: vec![
            format!("F_(n,eps) at eps={eps}, p={p}; n must be a power of two"),
            "forced_s2: min over {feasible_midpoint, linint, zero} of the scripted free-guess loss".into(),
            "s1_bound: 1 + (n eps)^p; s1_measured: max midpoint loss over 50 radius-1 walks".into(),
            "ratio_lower: forced_s2 / s1_bound, which grows like log2 n".into(),
        ],
        header: vec!["n", "log2_n", "forced_s2", "s1_bound", "s1_measured", "ratio_lower"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    r.n.to_string(),
                    r.log2_n.to_string(),
                    r.forced_s2.to_string(),
                    r.s1_bound.to_string(),
                    r.s1_measured.to_string(),
                    r.ratio_lower.to_string(),
                ]
            })
            .collect(),
    })
}

fn gn_ratio(grid: &[f64], opts: &TableOptions) -> CliResult<Table> {
    let (eps, n) = (opts.eps.unwrap_or(1e-4), opts.n.unwrap_or(17));
    let mut rows = Vec::new();
    for &p in grid {
        let (forced_s2, _) = forced_family_loss(&FamilyKind::GNEps { n, eps }, p)?;
        let (s1_measured, _) = s1_family_loss(&g_n_eps(n, eps)?, p, 4 * n as u64, 50)?;
        let s1_bound = 1.0 + (n as f64 * eps).powf(p);
        let c_n = g_n_constant(n, p);
        rows.push(vec![
            p.to_string(),
            c_n.to_string(),
            forced_s2.to_string(),
            s1_bound.to_string(),
            s1_measured.to_string(),
            (c_n / s1_bound).to_string(),
            ((n - 1) as f64).sqrt().to_string(),
        ]);
    }
    Ok(Table {
        comments: vec![
            format!("G_(n,eps) at n={n}, eps={eps}"),
            "c_n: (n-1) / ((1 + (n-1)^(1/p)) / 2)^p, the loss the free-guess script forces on every learner".into(),
            "forced_s2_baselines: min over {feasible_midpoint, linint, zero} of the scripted loss (>= c_n)".into(),
            "s1_bound: 1 + (n eps)^p; s1_measured: max midpoint loss over 50 radius-1 walks".into(),
            "ratio_lower: c_n / s1_bound, tending to sqrt(n-1) as p grows".into(),
        ],
        header: vec![
            "p",
            "c_n",
            "forced_s2_baselines",
            "s1_bound",
            "s1_measured",
            "ratio_lower",
            "sqrt_n_minus_1",
        ],
        rows,
    })
}

fn eps_step(grid: &[f64], opts: &TableOptions) -> CliResult<Table> {
    let (p, q) = (opts.p.unwrap_or(2.0), opts.q.unwrap_or(3.0));
    let mut rows = Vec::new();
    for n in counts(grid, "N")? {
        let config = GameConfig::new(p, q, Scenario::S1 { radius: 1.0 })?.with_horizon(n);
        let mut adv = EpsStep::new(n, q)?;
        let prime = run_game(&config, &mut LinintPrime::new(), &mut adv)?.cumulative_loss;
        let mut adv = EpsStep::new(n, q)?;
        let zero = run_game(&config, &mut ZeroLearner, &mut adv)?.cumulative_loss;
        rows.push(vec![
            n.to_string(),
            adv.eps().to_string(),
            prime.to_string(),
            zero.to_string(),
            adv.forced_loss(p).to_string(),
        ]);
    }
    Ok(Table {
        comments: vec![
            format!("eps_step at p={p}, q={q} under S1 (R=1); eps = N^(-1/q)"),
            "loss_*: cumulative loss of the named learner; forced_bound: N (eps/2)^p".into(),
        ],
        header: vec!["N", "eps", "loss_linint_prime", "loss_zero", "forced_bound"],
        rows,
    })
}

fn scaling(grid: &[f64], opts: &TableOptions) -> CliResult<Table> {
    let (p, q) = (opts.p.unwrap_or(2.0), opts.q.unwrap_or(2.0));
    let games = 20;
    let mut rows = Vec::new();
    for &radius in grid {
        let (dev, zero) = scaling_deviation(p, q, radius, games)?;
        rows.push(vec![
            radius.to_string(),
            radius_loss_factor(radius, p, q).to_string(),
            dev.to_string(),
            games.to_string(),
            zero.to_string(),
        ]);
    }
    Ok(Table {
        comments: vec![
            format!("LININT' in coupled radius-R games at p={p}, q={q}"),
            "expected_factor: R^((q-1)p/q); max_rel_deviation: max |ratio / expected_factor - 1|".into(),
        ],
        header: vec!["R", "expected_factor", "max_rel_deviation", "games", "zero_loss_games"],
        rows,
    })
}

pub fn build_table(name: &str, grid: &[f64], opts: &TableOptions) -> CliResult<Table> {
    match name {
        "fn_ratio" => fn_ratio(grid, opts),
        "gn_ratio" => gn_ratio(grid, opts),
        "eps_step" => eps_step(grid, opts),
        "scaling" => scaling(grid, opts),
        other => Err(CliError::usage(format!(
            "unknown table `{other}` (known: {})",
            TABLES.iter().map(|t| t.name).collect::<Vec<_>>().join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("2, 4,8").unwrap(), vec![2.0, 4.0, 8.0]);
        assert!(parse_grid("").unwrap().is_empty());
        assert!(parse_grid("2,x").is_err());
        assert!(counts(&[2.5], "n").is_err());
    }

    #[test]
    fn empty_grid_gives_header_only() {
        let opts = TableOptions {
            p: None,
            q: None,
            eps: None,
            n: None,
        };
        let table = build_table("fn_ratio", &[], &opts).unwrap();
        let mut out = Vec::new();
        table.write_csv(&mut out, &[]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data, vec!["n,log2_n,forced_s2,s1_bound,s1_measured,ratio_lower"]);
    }
}
