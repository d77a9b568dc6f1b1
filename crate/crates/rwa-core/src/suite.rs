//! The named check catalog: every distributional claim the crate verifies,
//! addressable by a stable id, runnable singly or as a full suite.
//!
//! Checks are independent, own disjoint RNG streams derived from the master
//! seed and their id, and may run concurrently; the report is sorted by
//! line id, so output is deterministic regardless of scheduling. A check
//! that errors internally is reported as a failed line with the reason, not
//! dropped.

use std::fmt;

use rayon::prelude::*;

use crate::dist::{
    order_statistic_weights, CompositionSpec, DirichletSampler, IntervalBeta, PowerSemicircle,
};
use crate::error::{Error, Result};
use crate::rng;
use crate::rwa::{
    ast_product, example_ast_4_1, example_ast_4_2, predict_distribution, sample_rwa, RwaProblem,
    TheoremSource, WeightPath,
};
use crate::transform::{
    ast_auto, ast_moment_series, ast_quadrature, z_grid, AstQuery, ClosedForm, SERIES_TOL,
    SHAPE_TOL,
};
use crate::verify::{
    ks_critical, ks_statistic, ks_two_sample, ks_two_sample_critical, verify_theorem,
    VerificationReport, VerifyConfig,
};

/// Agreement required between any two transform routes on the route grid.
const ROUTE_PAIR_TOL: f64 = 1e-9;

/// Fraction of grid cells allowed to fall outside their combined error
/// estimates; the quadrature estimate is a heuristic, not a bound.
const EST_MISS_FRACTION: f64 = 0.01;

/// A formula gap must exceed this to count as the documented discrepancy
/// rather than ordinary numerical noise.
const FORMULA_GAP_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// A deviation that is itself the expected outcome: documented, pinned
    /// by a statistic, and not a suite failure.
    KnownDiscrepancy,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::KnownDiscrepancy => "KNOWN-DISCREPANCY",
        })
    }
}

/// One report row: id, observed statistic, the threshold it was held to,
/// and the verdict. Rendered tab-separated for machine consumption.
#[derive(Debug, Clone)]
pub struct ReportLine {
    pub id: String,
    pub statistic: f64,
    pub threshold: f64,
    pub verdict: Verdict,
    pub note: Option<String>,
}

impl ReportLine {
    fn gate(id: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        let verdict = if statistic <= threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            id: id.into(),
            statistic,
            threshold,
            verdict,
            note: None,
        }
    }

    /// Inverted gate for negative controls: passing means the statistic
    /// EXCEEDS the threshold.
    fn gate_above(id: impl Into<String>, statistic: f64, threshold: f64) -> Self {
        let verdict = if statistic > threshold {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            id: id.into(),
            statistic,
            threshold,
            verdict,
            note: None,
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{}\t{:.16e}\t{:.16e}\t{}",
            self.id, self.statistic, self.threshold, self.verdict
        );
        if let Some(note) = &self.note {
            s.push('\t');
            s.push_str(note);
        }
        s
    }
}

/// All lines a suite run produced, sorted by id.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub lines: Vec<ReportLine>,
}

impl SuiteReport {
    /// True when no line failed; known discrepancies do not fail a suite.
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(|l| l.verdict != Verdict::Fail)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.lines {
            out.push_str(&line.render());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Ctx {
    seed: u64,
    config: VerifyConfig,
}

struct Check {
    id: &'static str,
    run: fn(&Ctx) -> Result<Vec<ReportLine>>,
}

/// Ids of every check in the catalog, in catalog order.
pub fn all_check_ids() -> Vec<&'static str> {
    catalog().iter().map(|c| c.id).collect()
}

/// Run the named checks (all of them when `ids` is `None`) under one master
/// seed. Unknown names are an error before anything runs.
pub fn run_suite(ids: Option<&[String]>, seed: u64, config: &VerifyConfig) -> Result<SuiteReport> {
    let cat = catalog();
    let selected: Vec<&Check> = match ids {
        None => cat.iter().collect(),
        Some(requested) => {
            let mut picked = Vec::with_capacity(requested.len());
            for name in requested {
                let found = cat.iter().find(|c| c.id == name).ok_or_else(|| {
                    Error::Domain(format!(
                        "unknown check {name:?}; known checks: {}",
                        cat.iter().map(|c| c.id).collect::<Vec<_>>().join(", ")
                    ))
                })?;
                picked.push(found);
            }
            picked
        }
    };
    let ctx = Ctx {
        seed,
        config: *config,
    };
    let mut lines: Vec<ReportLine> = selected
        .par_iter()
        .flat_map(|check| match (check.run)(&ctx) {
            Ok(lines) => lines,
            Err(e) => vec![ReportLine {
                id: format!("{}/error", check.id),
                statistic: f64::NAN,
                threshold: 0.0,
                verdict: Verdict::Fail,
                note: Some(e.to_string()),
            }],
        })
        .collect();
    lines.sort_by(|x, y| x.id.cmp(&y.id));
    Ok(SuiteReport { lines })
}

fn catalog() -> Vec<Check> {
    vec![
        Check {
            id: "routes:grid",
            run: routes_grid,
        },
        Check {
            id: "thm2.2:sym:r=1,2",
            run: thm22_sym_r12,
        },
        Check {
            id: "thm2.2:sym:r=2,3",
            run: thm22_sym_r23,
        },
        Check {
            id: "thm2.2:sym:r=1,2,3",
            run: thm22_sym_r123,
        },
        Check {
            id: "thm2.2:sym:r=1,1,1",
            run: thm22_sym_r111,
        },
        Check {
            id: "thm2.2:sep:s=0.5,1",
            run: thm22_sep_half_one,
        },
        Check {
            id: "thm2.2:sep:s=0.5,2.5",
            run: thm22_sep_half_fivehalf,
        },
        Check {
            id: "thm2.2:sep:s=0.5,1,1.5",
            run: thm22_sep_arith,
        },
        Check {
            id: "thm2.2:sep:s=0.3,0.7,1.2",
            run: thm22_sep_ragged,
        },
        Check {
            id: "thm3.1:r=1,2",
            run: thm31_r12,
        },
        Check {
            id: "thm3.2:r=1,2,3",
            run: thm32_r123,
        },
        Check {
            id: "cor3.1:r=2,2",
            run: cor31_r22,
        },
        Check {
            id: "cor3.2:n=2",
            run: cor32_n2,
        },
        Check {
            id: "cor3.2:n=3",
            run: cor32_n3,
        },
        Check {
            id: "cor3.2:chain",
            run: cor32_chain,
        },
        Check {
            id: "example4.1:m=3",
            run: example41_m3,
        },
        Check {
            id: "example4.2:m=2",
            run: example42_m2,
        },
        Check {
            id: "example4.3:k=3",
            run: example43_k3,
        },
        Check {
            id: "example4.4:k=4",
            run: example44_k4,
        },
        Check {
            id: "weights:r=1,2",
            run: weights_r12,
        },
        Check {
            id: "negative:thm3.1:r=1,2",
            run: negative_thm31,
        },
        Check {
            id: "negative:thm3.2:r=1,2,3",
            run: negative_thm32,
        },
        Check {
            id: "negative:example4.3:k=3",
            run: negative_example43,
        },
        Check {
            id: "negative:cor3.2:n=2",
            run: negative_cor32_n2,
        },
        Check {
            id: "negative:cor3.2:n=3",
            run: negative_cor32_n3,
        },
    ]
}

/// Max |product - transform of `law`| over the standard z grid.
fn identity_max_err(problem: &RwaProblem, law: &IntervalBeta) -> Result<f64> {
    let radius = problem
        .inputs()
        .iter()
        .map(IntervalBeta::support_radius)
        .fold(law.support_radius(), f64::max);
    let order = problem.order_total();
    let mut max = 0.0f64;
    for z in z_grid(radius) {
        let lhs = ast_product(problem, z)?;
        let rhs = ast_auto(law, order, z)?.value;
        max = max.max((lhs - rhs).abs());
    }
    Ok(max)
}

/// Expand a full verification into one line per gate.
fn verify_lines(report: &VerificationReport, config: &VerifyConfig) -> Vec<ReportLine> {
    let mut lines = vec![
        ReportLine::gate(
            format!("{}/identity", report.check_id),
            report.z_grid_max_abs_err,
            config.z_tolerance,
        ),
        ReportLine::gate(
            format!("{}/ks", report.check_id),
            report.ks_statistic,
            report.ks_critical,
        ),
    ];
    for m in &report.moment_errors {
        lines.push(ReportLine::gate(
            format!("{}/moment{}", report.check_id, m.order),
            m.abs_error,
            5.0 * m.mc_std_error,
        ));
    }
    lines
}

fn mc_check(
    ctx: &Ctx,
    id: &str,
    problem: &RwaProblem,
    path: WeightPath,
    expected: Option<IntervalBeta>,
) -> Result<Vec<ReportLine>> {
    let report = verify_theorem(id, problem, path, expected, &ctx.config, ctx.seed)?;
    Ok(verify_lines(&report, &ctx.config))
}

/// Identity-only check: predict the law, compare product and combined
/// transforms on the grid.
fn identity_check(
    ctx: &Ctx,
    id: &str,
    r: &[f64],
    inputs: Vec<IntervalBeta>,
) -> Result<Vec<ReportLine>> {
    let problem = RwaProblem::from_dirichlet(r.to_vec(), inputs)?;
    let pred = predict_distribution(&problem)
        .ok_or_else(|| Error::Domain(format!("{id}: inputs fit no closed-form pattern")))?;
    let err = identity_max_err(&problem, &pred.law)?;
    Ok(vec![ReportLine::gate(id, err, ctx.config.z_tolerance)])
}

// Route agreement over the full parameter grid: 6x6 shapes, 3 supports,
// 4 orders, 21 z points. Quadrature and the moment series must agree to
// 1e-9 everywhere; where a closed form applies it must agree with
// quadrature to the same tolerance; and the observed |quad - series| gap
// must sit inside the summed error estimates in at least 99% of cells.
fn routes_grid(_ctx: &Ctx) -> Result<Vec<ReportLine>> {
    const SHAPES: [f64; 6] = [0.5, 1.0, 1.5, 2.0, 3.5, 5.0];
    const SUPPORTS: [(f64, f64); 3] = [(0.0, 1.0), (-1.0, 1.0), (-2.0, 3.0)];
    const ORDERS: [f64; 4] = [0.5, 1.0, 2.0, 3.5];

    let mut cells = Vec::with_capacity(SHAPES.len() * SHAPES.len() * SUPPORTS.len() * ORDERS.len());
    for &p in &SHAPES {
        for &q in &SHAPES {
            for &(a, b) in &SUPPORTS {
                for &d in &ORDERS {
                    cells.push((p, q, a, b, d));
                }
            }
        }
    }

    struct CellAgg {
        pair: f64,
        closed: f64,
        points: usize,
        misses: usize,
    }

    let per_cell = cells
        .par_iter()
        .map(|&(p, q, a, b, d)| -> Result<CellAgg> {
            let dist = IntervalBeta::new(p, q, a, b)?;
            let form = ClosedForm::match_for(&dist, d);
            let mut agg = CellAgg {
                pair: 0.0,
                closed: 0.0,
                points: 0,
                misses: 0,
            };
            for z in z_grid(dist.support_radius()) {
                let query = AstQuery::new(dist, d, z)?;
                let quad = ast_quadrature(query)?;
                let series = ast_moment_series(query, SERIES_TOL)?;
                let gap = (quad.value - series.value).abs();
                agg.pair = agg.pair.max(gap);
                agg.points += 1;
                if gap > quad.est_error + series.est_error {
                    agg.misses += 1;
                }
                if let Some(form) = form {
                    agg.closed = agg.closed.max((form.eval(z)? - quad.value).abs());
                }
            }
            Ok(agg)
        })
        .collect::<Result<Vec<_>>>()?;

    let pair = per_cell.iter().fold(0.0f64, |m, c| m.max(c.pair));
    let closed = per_cell.iter().fold(0.0f64, |m, c| m.max(c.closed));
    let points: usize = per_cell.iter().map(|c| c.points).sum();
    let misses: usize = per_cell.iter().map(|c| c.misses).sum();
    Ok(vec![
        ReportLine::gate("routes:grid/pair", pair, ROUTE_PAIR_TOL),
        ReportLine::gate("routes:grid/closed", closed, ROUTE_PAIR_TOL),
        ReportLine::gate(
            "routes:grid/est-miss",
            misses as f64 / points as f64,
            EST_MISS_FRACTION,
        ),
    ])
}

fn sym_input(r: f64, a: f64, b: f64) -> Result<IntervalBeta> {
    IntervalBeta::new(r + 0.5, r + 0.5, a, b)
}

fn thm22_sym_r12(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sym:r=1,2",
        &[1.0, 2.0],
        vec![sym_input(1.0, 0.0, 1.0)?, sym_input(2.0, 0.0, 1.0)?],
    )
}

fn thm22_sym_r23(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sym:r=2,3",
        &[2.0, 3.0],
        vec![sym_input(2.0, -1.0, 1.0)?, sym_input(3.0, -1.0, 1.0)?],
    )
}

fn thm22_sym_r123(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sym:r=1,2,3",
        &[1.0, 2.0, 3.0],
        vec![
            sym_input(1.0, 0.0, 1.0)?,
            sym_input(2.0, 0.0, 1.0)?,
            sym_input(3.0, 0.0, 1.0)?,
        ],
    )
}

fn thm22_sym_r111(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sym:r=1,1,1",
        &[1.0, 1.0, 1.0],
        vec![sym_input(1.0, -1.0, 1.0)?; 3],
    )
}

fn thm22_sep_half_one(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sep:s=0.5,1",
        &[1.0, 2.0],
        vec![
            IntervalBeta::new(0.5, 0.5, 0.0, 1.0)?,
            IntervalBeta::new(1.0, 1.0, 0.0, 1.0)?,
        ],
    )
}

fn thm22_sep_half_fivehalf(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sep:s=0.5,2.5",
        &[2.0, 3.0],
        vec![
            IntervalBeta::new(0.5, 1.5, -1.0, 1.0)?,
            IntervalBeta::new(2.5, 0.5, -1.0, 1.0)?,
        ],
    )
}

fn thm22_sep_arith(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sep:s=0.5,1,1.5",
        &[1.0, 2.0, 3.0],
        vec![
            IntervalBeta::new(0.5, 0.5, 0.0, 1.0)?,
            IntervalBeta::new(1.0, 1.0, 0.0, 1.0)?,
            IntervalBeta::new(1.5, 1.5, 0.0, 1.0)?,
        ],
    )
}

fn thm22_sep_ragged(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    identity_check(
        ctx,
        "thm2.2:sep:s=0.3,0.7,1.2",
        &[1.0, 1.0, 2.0],
        vec![
            IntervalBeta::new(0.3, 0.7, -1.0, 1.0)?,
            IntervalBeta::new(0.7, 0.3, -1.0, 1.0)?,
            IntervalBeta::new(1.2, 0.8, -1.0, 1.0)?,
        ],
    )
}

fn thm31_problem() -> Result<RwaProblem> {
    RwaProblem::from_composition(
        CompositionSpec::new(3, vec![1])?,
        vec![sym_input(1.0, 0.0, 1.0)?, sym_input(2.0, 0.0, 1.0)?],
    )
}

fn thm31_r12(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "thm3.1:r=1,2",
        &thm31_problem()?,
        WeightPath::OrderStatistics,
        None,
    )
}

fn thm32_problem() -> Result<RwaProblem> {
    RwaProblem::from_dirichlet(
        vec![1.0, 2.0, 3.0],
        vec![
            IntervalBeta::new(0.5, 0.5, 0.0, 1.0)?,
            IntervalBeta::new(1.0, 1.0, 0.0, 1.0)?,
            IntervalBeta::new(1.5, 1.5, 0.0, 1.0)?,
        ],
    )
}

fn thm32_r123(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "thm3.2:r=1,2,3",
        &thm32_problem()?,
        WeightPath::Dirichlet,
        None,
    )
}

fn cor31_r22(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    let u = IntervalBeta::uniform(0.0, 1.0)?;
    let problem = RwaProblem::from_dirichlet(vec![2.0, 2.0], vec![u; 2])?;
    mc_check(ctx, "cor3.1:r=2,2", &problem, WeightPath::Dirichlet, None)
}

fn arcsine_chain_problem(n: u32) -> Result<RwaProblem> {
    let arc = IntervalBeta::arcsine(-1.0, 1.0)?;
    RwaProblem::from_composition(CompositionSpec::all_cuts(n)?, vec![arc; n as usize])
}

fn cor32_n2(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "cor3.2:n=2",
        &arcsine_chain_problem(2)?,
        WeightPath::OrderStatistics,
        None,
    )
}

fn cor32_n3(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "cor3.2:n=3",
        &arcsine_chain_problem(3)?,
        WeightPath::OrderStatistics,
        None,
    )
}

// Finest-composition arcsine averages for n = 2..5: the predicted law must
// be the power semicircle with theta = (n - 3) / 2 exactly, and the product
// identity must hold on the grid for each n.
fn cor32_chain(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    let mut shape_dev = 0.0f64;
    let mut identity = 0.0f64;
    let mut mislabel: Option<u32> = None;
    for n in 2..=5u32 {
        let problem = arcsine_chain_problem(n)?;
        let pred = predict_distribution(&problem).ok_or_else(|| {
            Error::Domain(format!("all-arcsine chain at n={n} produced no prediction"))
        })?;
        let target = PowerSemicircle::new((f64::from(n) - 3.0) / 2.0, 1.0)?.to_beta();
        shape_dev = shape_dev
            .max((pred.law.p() - target.p()).abs())
            .max((pred.law.q() - target.q()).abs())
            .max((pred.law.a() - target.a()).abs())
            .max((pred.law.b() - target.b()).abs());
        if pred.source != TheoremSource::Cor32 {
            mislabel = Some(n);
        }
        identity = identity.max(identity_max_err(&problem, &pred.law)?);
    }
    let mut predict_line = ReportLine::gate("cor3.2:chain/predict", shape_dev, SHAPE_TOL);
    if let Some(n) = mislabel {
        predict_line.verdict = Verdict::Fail;
        predict_line =
            predict_line.with_note(format!("n={n} lost the arcsine specialization label"));
    }
    Ok(vec![
        predict_line,
        ReportLine::gate("cor3.2:chain/identity", identity, ctx.config.z_tolerance),
    ])
}

fn example41_problem() -> Result<RwaProblem> {
    RwaProblem::from_composition(
        CompositionSpec::new(3, vec![1])?,
        vec![
            IntervalBeta::arcsine(-1.0, 1.0)?,
            IntervalBeta::new(2.5, 2.5, -1.0, 1.0)?,
        ],
    )
}

// One arcsine factor absorbs the rest: the average of an arcsine input and
// a (5/2, 5/2) input keeps the (5/2, 5/2) law. The printed reference
// formula is also held to the product on the grid.
fn example41_m3(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    let problem = example41_problem()?;
    let expected = IntervalBeta::new(2.5, 2.5, -1.0, 1.0)?;
    let mut lines = mc_check(
        ctx,
        "example4.1:m=3",
        &problem,
        WeightPath::OrderStatistics,
        Some(expected),
    )?;
    let mut dev = 0.0f64;
    for z in z_grid(1.0) {
        dev = dev.max((example_ast_4_1(3, -1.0, 1.0, z)? - ast_product(&problem, z)?).abs());
    }
    lines.push(ReportLine::gate(
        "example4.1:m=3/formula",
        dev,
        ctx.config.z_tolerance,
    ));
    Ok(lines)
}

// The two-block average with one endpoint-heavy input: the claimed
// (m + 1/2, m - 1/2) law is tested on its own evidence, while the printed
// formula is compared against quadrature of that law at z = 0, where any
// transform must equal one. The formula gives sqrt(2) there; the gap is
// pinned as KNOWN-DISCREPANCY, and would flip to FAIL if it ever shrank
// into agreement.
fn example42_m2(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    let problem = RwaProblem::from_composition(
        CompositionSpec::new(2, vec![1])?,
        vec![
            IntervalBeta::new(1.5, 0.5, 0.0, 1.0)?,
            IntervalBeta::new(1.5, 1.5, 0.0, 1.0)?,
        ],
    )?;
    let claimed = IntervalBeta::new(2.5, 1.5, 0.0, 1.0)?;
    let mut lines = mc_check(
        ctx,
        "example4.2:m=2",
        &problem,
        WeightPath::OrderStatistics,
        Some(claimed),
    )?;
    let oracle = ast_quadrature(AstQuery::new(claimed, 2.0, 0.0)?)?.value;
    let gap = (example_ast_4_2(2, 0.0, 1.0, 0.0)? - oracle).abs();
    let verdict = if gap > FORMULA_GAP_FLOOR {
        Verdict::KnownDiscrepancy
    } else {
        Verdict::Fail
    };
    lines.push(ReportLine {
        id: "example4.2:m=2/formula".into(),
        statistic: gap,
        threshold: FORMULA_GAP_FLOOR,
        verdict,
        note: Some(
            "printed formula kept verbatim; quadrature of the claimed law adjudicates".into(),
        ),
    });
    Ok(lines)
}

fn example43_problem() -> Result<RwaProblem> {
    let u = IntervalBeta::uniform(-1.0, 2.0)?;
    RwaProblem::from_dirichlet(vec![2.0, 2.0, 2.0], vec![u; 3])
}

fn example43_k3(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "example4.3:k=3",
        &example43_problem()?,
        WeightPath::Dirichlet,
        None,
    )
}

fn example44_k4(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    mc_check(
        ctx,
        "example4.4:k=4",
        &arcsine_chain_problem(4)?,
        WeightPath::OrderStatistics,
        None,
    )
}

// The two weight constructions must produce the same first coordinate in
// law: order statistic gaps grouped by (1, 2) against Dirichlet(1, 2).
fn weights_r12(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    let comp = CompositionSpec::new(3, vec![1])?;
    let count = ctx.config.sample_count;
    let mut r_os = rng::substream(ctx.seed, "weights:r=1,2/order-statistics");
    let mut xs: Vec<f64> = (0..count)
        .map(|_| order_statistic_weights(&comp, &mut r_os).weights()[0])
        .collect();
    let sampler = DirichletSampler::new(&[1.0, 2.0])?;
    let mut r_dir = rng::substream(ctx.seed, "weights:r=1,2/dirichlet");
    let mut ys: Vec<f64> = (0..count)
        .map(|_| sampler.draw(&mut r_dir).weights()[0])
        .collect();
    xs.sort_unstable_by(f64::total_cmp);
    ys.sort_unstable_by(f64::total_cmp);
    let d = ks_two_sample(&xs, &ys);
    let crit = ks_two_sample_critical(xs.len(), ys.len(), ctx.config.alpha);
    Ok(vec![ReportLine::gate("weights:r=1,2", d, crit)])
}

/// Negative control: sample the true average, then require the KS distance
/// to every 0.25-perturbed version of the predicted law to exceed the
/// critical value. The reported statistic is the closest (hardest)
/// perturbation.
fn negative_control(
    ctx: &Ctx,
    id: &str,
    problem: &RwaProblem,
    path: WeightPath,
) -> Result<Vec<ReportLine>> {
    let law = predict_distribution(problem)
        .ok_or_else(|| Error::Domain(format!("{id}: no predicted law to perturb")))?
        .law;
    let mut rng = rng::substream(ctx.seed, id);
    let mut xs = sample_rwa(problem, path, &mut rng, ctx.config.sample_count)?;
    xs.sort_unstable_by(f64::total_cmp);
    let crit = ks_critical(xs.len(), ctx.config.alpha);
    let perturbed = [
        IntervalBeta::new(law.p() + 0.25, law.q(), law.a(), law.b())?,
        IntervalBeta::new(law.p(), law.q() + 0.25, law.a(), law.b())?,
    ];
    let closest = perturbed
        .iter()
        .map(|wrong| ks_statistic(&xs, |x| wrong.cdf(x)))
        .fold(f64::INFINITY, f64::min);
    Ok(vec![ReportLine::gate_above(id, closest, crit)])
}

fn negative_thm31(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    negative_control(
        ctx,
        "negative:thm3.1:r=1,2",
        &thm31_problem()?,
        WeightPath::OrderStatistics,
    )
}

fn negative_thm32(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    negative_control(
        ctx,
        "negative:thm3.2:r=1,2,3",
        &thm32_problem()?,
        WeightPath::Dirichlet,
    )
}

fn negative_example43(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    negative_control(
        ctx,
        "negative:example4.3:k=3",
        &example43_problem()?,
        WeightPath::Dirichlet,
    )
}

fn negative_cor32_n2(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    negative_control(
        ctx,
        "negative:cor3.2:n=2",
        &arcsine_chain_problem(2)?,
        WeightPath::OrderStatistics,
    )
}

fn negative_cor32_n3(ctx: &Ctx) -> Result<Vec<ReportLine>> {
    negative_control(
        ctx,
        "negative:cor3.2:n=3",
        &arcsine_chain_problem(3)?,
        WeightPath::OrderStatistics,
    )
}
