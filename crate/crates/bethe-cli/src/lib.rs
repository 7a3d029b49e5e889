//! Command-line front end: exact evaluations of the determinant kernel,
//! highest coefficients, entry actions, the scalar-product partition sum,
//! the brute-force chain oracle, and the verification suites. All input and
//! output is JSON with rationals as `"p/q"` strings.

pub mod jsonio;
pub mod report;
pub mod suites;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use bethe_core::action::{act_multiple, FormalCombination, ModelContext};
use bethe_core::draw::{draw_generic, DetStream};
use bethe_core::izergin::{izergin, IzerginArgs};
use bethe_core::superaction::graded_act_multiple;
use bethe_core::{
    scalar_product_sum, AlgebraSpec, BetheIndex, ChainSpec, GammaProfile, HCRequest, HCSelector,
    HcEngine, OracleReport, ParamSet, Rat, Scalar,
};

use report::VerifyReport;
use suites::{build_suite, SuiteConfig, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "bethe", version, about = "Exact rational computations for nested Bethe vectors")]
pub struct Cli {
    /// Kernel constant, as `p` or `p/q`.
    #[arg(long, global = true, default_value = "1")]
    pub c: String,

    /// Seed for every deterministic parameter draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Algebra shape `m,n`; odd states are present when n > 0.
    #[arg(long, global = true)]
    pub graded: Option<String>,

    /// Pretty-print JSON output with this indent width.
    #[arg(long, global = true)]
    pub json_indent: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Evaluate a highest coefficient of the scalar-product expansion.
    Hc {
        /// Number of Bethe levels; implied by --graded when that is given.
        #[arg(long = "N")]
        levels: Option<usize>,
        /// First index, `[["p/q", ...], ...]` with one array per level.
        #[arg(long)]
        x: String,
        /// Second index, same shape as --x.
        #[arg(long)]
        t: String,
        /// Recursive expansion: first-level, last-level, shifted-first, shifted-last.
        #[arg(long, default_value = "last-level")]
        selector: String,
    },
    /// Expand a monodromy-entry action on a formal vector.
    Action {
        /// Entry row.
        #[arg(long)]
        i: usize,
        /// Entry column.
        #[arg(long)]
        j: usize,
        /// Spectral parameters, `["p/q", ...]`.
        #[arg(long)]
        z: String,
        /// Index of the starting vector, one array per level.
        #[arg(long)]
        t: String,
        /// Twist values, `["p/q", ...]`, one per state; all ones by default.
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Evaluate the scalar product through the partition-sum formula.
    Sumformula {
        /// First index, one array per level.
        #[arg(long)]
        x: String,
        /// Second index, same shape as --x.
        #[arg(long)]
        t: String,
        /// Twist values, one per state; all ones by default.
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Evaluate the determinant kernel of two equal-size sets.
    Izergin {
        /// Row parameters, `["p/q", ...]`.
        #[arg(long)]
        y: String,
        /// Column parameters, `["p/q", ...]`.
        #[arg(long)]
        x: String,
        /// Kernel parity: 1 selects the negated constant.
        #[arg(long, default_value_t = 0)]
        parity: u8,
    },
    /// Run the dense-matrix oracle on one explicit chain.
    ChainOracle {
        /// Algebra shape `m,n`.
        #[arg(long)]
        algebra: String,
        /// Number of sites.
        #[arg(long)]
        sites: usize,
        /// Inhomogeneities, `["p/q", ...]`, one per site; drawn by default.
        #[arg(long)]
        xi: Option<String>,
        /// Twist values, one per state; drawn by default.
        #[arg(long)]
        kappa: Option<String>,
    },
    /// Run verification suites and emit a machine-readable report.
    Verify {
        /// One of kernels, izergin, action, graded, scalar, chain, all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn core_err(e: bethe_core::Error) -> anyhow::Error {
    anyhow!("{e}")
}

fn parse_algebra(graded: &Option<String>, levels: Option<usize>) -> Result<AlgebraSpec> {
    if let Some(text) = graded {
        let (m, n) = jsonio::algebra_arg(text)?;
        let alg = AlgebraSpec::new(m, n).map_err(core_err)?;
        if let Some(lv) = levels {
            if lv != alg.levels() {
                bail!("gl({m}|{n}) has {} levels, not {lv}", alg.levels());
            }
        }
        Ok(alg)
    } else {
        let lv = levels.ok_or_else(|| anyhow!("provide --N or --graded m,n"))?;
        AlgebraSpec::non_graded(lv + 1).map_err(core_err)
    }
}

fn default_kappa(states: usize, kappa: &Option<String>) -> Result<Vec<Rat>> {
    match kappa {
        Some(text) => {
            let vals = jsonio::rat_list(text)?;
            if vals.len() != states {
                bail!("need {states} twist values, got {}", vals.len());
            }
            Ok(vals)
        }
        None => Ok(vec![<Rat as Scalar>::one(); states]),
    }
}

fn check_shape(alg: &AlgebraSpec, index: &BetheIndex<Rat>, name: &str) -> Result<()> {
    if index.num_levels() != alg.levels() {
        bail!(
            "--{name} needs {} levels for this algebra, got {}",
            alg.levels(),
            index.num_levels()
        );
    }
    Ok(())
}

/// Executes one parsed invocation; returns the rendered output and the
/// process exit code.
pub fn execute(cli: Cli) -> Result<(String, i32)> {
    let c = jsonio::rat_arg(&cli.c)?;
    if c.is_zero() {
        bail!("the kernel constant must be nonzero");
    }
    let indent = cli.json_indent;
    match cli.command {
        Command::Hc { levels, x, t, selector } => {
            let alg = parse_algebra(&cli.graded, levels)?;
            let xs = jsonio::bethe_index(&x)?;
            let ts = jsonio::bethe_index(&t)?;
            check_shape(&alg, &xs, "x")?;
            check_shape(&alg, &ts, "t")?;
            let selector: HCSelector = selector.parse().map_err(core_err)?;
            let engine = HcEngine::new(c).map_err(core_err)?;
            let z = engine
                .highest_coefficient(&HCRequest { algebra: alg, xs, ts, selector })
                .map_err(core_err)?;
            Ok((jsonio::render(&json!({ "Z": z.to_string() }), indent)?, 0))
        }
        Command::Action { i, j, z, t, kappa } => {
            let ts = jsonio::bethe_index(&t)?;
            let alg = match &cli.graded {
                Some(_) => parse_algebra(&cli.graded, None)?,
                None => AlgebraSpec::non_graded(ts.num_levels() + 1).map_err(core_err)?,
            };
            check_shape(&alg, &ts, "t")?;
            let zs = jsonio::param_set(&z)?;
            if zs.is_empty() {
                bail!("--z needs at least one spectral parameter");
            }
            let kappa = default_kappa(alg.states(), &kappa)?;
            let graded = alg.is_graded();
            let ctx = ModelContext::free(alg, c, kappa, cli.seed).map_err(core_err)?;
            let combo = FormalCombination::ket(ts);
            let out = if graded {
                graded_act_multiple(&ctx, GammaProfile::default(), i, j, &zs, &combo)
                    .map_err(core_err)?
            } else {
                act_multiple(&ctx, i, j, &zs, &combo).map_err(core_err)?
            };
            let terms: Vec<Value> = out
                .terms()
                .map(|(bv, coeff)| {
                    json!({
                        "index": jsonio::index_value(&bv.index),
                        "coeff": coeff.to_string(),
                    })
                })
                .collect();
            Ok((jsonio::render(&json!({ "terms": terms }), indent)?, 0))
        }
        Command::Sumformula { x, t, kappa } => {
            let xs = jsonio::bethe_index(&x)?;
            let ts = jsonio::bethe_index(&t)?;
            let alg = match &cli.graded {
                Some(_) => parse_algebra(&cli.graded, None)?,
                None => AlgebraSpec::non_graded(xs.num_levels() + 1).map_err(core_err)?,
            };
            check_shape(&alg, &xs, "x")?;
            check_shape(&alg, &ts, "t")?;
            let kappa = default_kappa(alg.states(), &kappa)?;
            let ctx = ModelContext::free(alg, c, kappa, cli.seed).map_err(core_err)?;
            let s = scalar_product_sum(&ctx, &xs, &ts).map_err(core_err)?;
            Ok((jsonio::render(&json!({ "S": s.to_string() }), indent)?, 0))
        }
        Command::Izergin { y, x, parity } => {
            let ys = jsonio::param_set(&y)?;
            let xs = jsonio::param_set(&x)?;
            let k = izergin(&c, &IzerginArgs { ys, xs, parity }).map_err(core_err)?;
            Ok((jsonio::render(&json!({ "K": k.to_string() }), indent)?, 0))
        }
        Command::ChainOracle { algebra, sites, xi, kappa } => {
            let (m, n) = jsonio::algebra_arg(&algebra)?;
            let alg = AlgebraSpec::new(m, n).map_err(core_err)?;
            let xi = match &xi {
                Some(text) => jsonio::rat_list(text)?,
                None => draw_generic(cli.seed, "xi", sites, &c, 4, &[]),
            };
            let kappa = match &kappa {
                Some(text) => jsonio::rat_list(text)?,
                None => {
                    let mut stream = DetStream::new(cli.seed, "kappa");
                    (0..alg.states()).map(|_| stream.next_nonzero_rat()).collect()
                }
            };
            let spec = ChainSpec::new(alg, sites, xi, kappa, c.clone()).map_err(core_err)?;
            let checks = run_chain_oracle(&spec, cli.seed)?;
            let ok = checks.iter().all(|r| r.ok);
            let rendered: Vec<Value> = checks
                .iter()
                .map(|r| {
                    let mut obj = json!({ "label": r.label, "ok": r.ok });
                    if let Some(mismatch) = &r.mismatch {
                        obj["mismatch"] = Value::String(mismatch.clone());
                    }
                    obj
                })
                .collect();
            let value = json!({
                "algebra": format!("{m},{n}"),
                "sites": sites,
                "xi": spec.xi().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "kappa": spec.kappa().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "dim": spec.dim(),
                "checks": rendered,
                "ok": ok,
            });
            Ok((jsonio::render(&value, indent)?, i32::from(!ok)))
        }
        Command::Verify { suite } => {
            let cfg = SuiteConfig { c, seed: cli.seed };
            let names: Vec<&str> = if suite == "all" {
                SUITE_NAMES.to_vec()
            } else if SUITE_NAMES.contains(&suite.as_str()) {
                vec![SUITE_NAMES[SUITE_NAMES.iter().position(|s| *s == suite).unwrap()]]
            } else {
                bail!(
                    "unknown suite '{suite}'; expected one of {} or all",
                    SUITE_NAMES.join(", ")
                );
            };
            let suites = names
                .into_iter()
                .map(|name| build_suite(name, &cfg).expect("listed suites exist"))
                .collect();
            let report = VerifyReport::assemble(cli.seed, suites);
            let ok = report.ok;
            let value = serde_json::to_value(&report)?;
            Ok((jsonio::render(&value, indent)?, i32::from(!ok)))
        }
    }
}

/// The oracle bundle for one explicit chain: the exchange relation at a
/// drawn point pair, vacuum triangularity with eigenvalues, and the
/// family comparisons available at this rank.
fn run_chain_oracle(spec: &ChainSpec, seed: u64) -> Result<Vec<OracleReport>> {
    let c = spec.c().clone();
    let mut avoid = spec.xi().to_vec();
    let pts = draw_generic(seed, "oracle-pts", 4, &c, 4, &avoid);
    avoid.extend(pts.iter().cloned());
    let mut out = Vec::new();

    let residual = spec.rtt_residual(&pts[0], &pts[1]).map_err(core_err)?;
    out.push(OracleReport {
        label: format!("exchange relation at ({}, {})", pts[0], pts[1]),
        ok: residual.is_zero(),
        mismatch: if residual.is_zero() { None } else { Some("nonzero residual".into()) },
    });

    let states = spec.algebra().states();
    let u = pts[2].clone();
    let vac = spec.vacuum();
    let mut vac_ok = true;
    let mut vac_detail = None;
    'vac: for i in 1..=states {
        for j in 1..=states {
            let image = spec.monodromy_entry(i, j, &u).map_err(core_err)?.apply(&vac).map_err(core_err)?;
            if i > j && !image.is_zero() {
                vac_ok = false;
                vac_detail = Some(format!("entry ({i},{j}) does not annihilate the vacuum"));
                break 'vac;
            }
            if i == j {
                let lam = spec.vacuum_lambda(i).map_err(core_err)?;
                let value = Rat::apply_ratfunc(&lam, &u).map_err(core_err)?;
                if image != vac.scale(&value) {
                    vac_ok = false;
                    vac_detail = Some(format!("diagonal entry {i} disagrees with its eigenvalue"));
                    break 'vac;
                }
            }
        }
    }
    out.push(OracleReport {
        label: format!("vacuum triangularity at {u}"),
        ok: vac_ok,
        mismatch: vac_detail,
    });

    if spec.algebra().levels() == 1 {
        let ts = ParamSet::singleton(pts[3].clone());
        let zs = ParamSet::singleton(pts[2].clone());
        for i in 1..=2usize {
            for j in 1..=2usize {
                out.push(spec.oracle_check_action(i, j, &zs, &ts).map_err(core_err)?);
            }
        }
    } else {
        let extra = draw_generic(seed, "oracle-corner", 1, &c, 4, &avoid);
        let zs = ParamSet::singleton(extra[0].clone());
        let ws = ParamSet::singleton(pts[3].clone());
        out.push(spec.oracle_check_corner(&zs, &ws).map_err(core_err)?);
        let nlev = spec.algebra().levels();
        for ell in 1..=nlev.min(2) {
            for i in 1..=nlev.min(2) {
                out.push(spec.oracle_check_zero_mode(ell, i, &ws).map_err(core_err)?);
            }
        }
    }
    Ok(out)
}
