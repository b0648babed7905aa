//! Command line front end for the conductor and ramification computations.
//!
//! Subcommands mirror the library surface: filtration and upper numbering
//! tables, character table dumps, conductor reports for representation
//! specs, closed-form verification with per-check reporting, discriminant
//! profiles along the radius sweep, and polygon-route cross checks.
//!
//! Exit codes: 0 on success, 1 when a verification target fails, 2 on
//! usage or input errors (including cap overruns). Reports are emitted as
//! JSON (canonical, exact rationals as "num/den" strings) or CSV (flat
//! projection). Identical configuration and seed produce byte-identical
//! output.

mod checks;
mod reports;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use swancore::classfn::ClassFunction;
use swancore::conductor::End;
use swancore::dixon::character_table;
use swancore::gl2::full_group;
use swancore::group::FinGroup;
use swancore::newton::{
    eisenstein_tower, level_valuations, lower_hull, residue_factorization_check, slope_stability,
    ValuedPoly,
};
use swancore::profile::sweep;
use swancore::reptypes::{
    borel_subgroup, iwahori_subgroup, ramified_candidates, u_char, unit_char_exponent, unit_group,
    unramified_candidates,
};
use swancore::ring::ResidueRing;
use swancore::Rat;

use checks::Check;
use reports::{
    simple_csv, CharTableOut, CheckOut, ComposeOut, ConductorEntry, ConductorOut, FiltrationOut,
    PolygonOut, ProfileOut, StabilityOut, TowerOut, UpperOut, ValuationsOut, VerifyOut, CONVENTION,
};

const CLASS_CAP: usize = 5000;
const STABILITY_TRIALS: u32 = 100;

#[derive(Parser)]
#[command(
    name = "swan",
    version,
    about = "Exact Swan and discriminant conductors for rank-two boundary actions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Jump table of the boundary stabilizer filtration
    Filtration(Common),
    /// Upper numbered jump table of the same filtration
    Upper(Common),
    /// Character table of the full matrix group over the ring
    Chartable(Common),
    /// Conductor report (both routes) for a representation spec
    Conductor {
        #[command(flatten)]
        common: Common,
        /// Representation: type:unramified, type:ramified, u:eps=<k>, irr:<row>
        #[arg(long)]
        rep: String,
    },
    /// Closed-form verification with one reported check per value
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        target: Target,
    },
    /// Discriminant profile of a representation along the radius sweep
    Profile {
        #[command(flatten)]
        common: Common,
        /// Representation: type:unramified, type:ramified, u:eps=<k>, irr:<row>
        #[arg(long)]
        rep: String,
        /// Sweep bound, a positive rational such as 1 or 3/2
        #[arg(long, default_value = "1")]
        s_max: String,
    },
    /// Polygon-route cross checks
    Newton {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        check: NewtonCheck,
    },
}

#[derive(Args)]
struct Common {
    /// Ring spec p:f:n:mode, for example 2:1:2:mixed or 2:2:1:equal
    #[arg(long)]
    ring: String,
    /// Output format; JSON is canonical, CSV a flat projection
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this path instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest group order a command may enumerate (table cap stays at 5000 classes)
    #[arg(long, default_value_t = 1_000_000)]
    cap: u64,
    /// Seed for randomized checks
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    /// Filtration jump values and subgroup orders
    Jumps,
    /// Upper numbered jump values and the top flat
    Upper,
    /// Conductor pair of every full-level candidate
    Unramified,
    /// Conductor pairs of every parahoric candidate at both ends
    Ramified,
    /// Break dimensions, Swan conductor and vanishing of the induced characters
    Induced,
    /// Fixed space dimensions of the induced characters
    InducedFixed,
    /// Polygon level valuations against the filtration
    Valuations,
    /// Eisenstein tower valuations and degree
    Tower,
    /// Residue factorization identity
    Compose,
    /// Every applicable target on this ring
    All,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::Jumps => "jumps",
            Target::Upper => "upper",
            Target::Unramified => "unramified",
            Target::Ramified => "ramified",
            Target::Induced => "induced",
            Target::InducedFixed => "induced-fixed",
            Target::Valuations => "valuations",
            Target::Tower => "tower",
            Target::Compose => "compose",
            Target::All => "all",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum NewtonCheck {
    /// Level valuations and the model polygon
    Valuations,
    /// Eisenstein tower report
    Tower,
    /// Residue factorization identity
    Compose,
    /// Hull stability under seeded random perturbations
    Stability,
}

enum Failure {
    /// Bad input or a cap overrun; exit 2.
    Usage(String),
    /// A verification target failed; the report was still emitted; exit 1.
    Verify,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn parse_ring(spec: &str) -> Result<Arc<ResidueRing>, Failure> {
    ResidueRing::parse(spec).map(Arc::new).map_err(|e| usage(e.to_string()))
}

fn parse_s_max(s: &str) -> Result<Rat, Failure> {
    let v = Rat::from_str(s).map_err(|_| usage(format!("--s-max must be a rational, got {s:?}")))?;
    if v <= Rat::from_integer(0.into()) {
        return Err(usage("--s-max must be positive"));
    }
    Ok(v)
}

fn full_order(r: &ResidueRing) -> u64 {
    let q = r.q as u64;
    let n = r.n as u64;
    q.pow(4 * (n as u32 - 1)) * (q * q - 1) * (q * q - q)
}

fn ball_order(r: &ResidueRing) -> u64 {
    let q = r.q as u64;
    (q - 1) * q.pow(2 * r.n - 1)
}

fn opposite_order(r: &ResidueRing) -> u64 {
    let q = r.q as u64;
    (q - 1) * q.pow(2 * r.n - 2)
}

fn guard(what: &str, order: u64, cap: u64) -> Result<(), Failure> {
    if order > cap {
        return Err(usage(format!(
            "{what} has order {order}, above the cap {cap}; raise --cap to proceed"
        )));
    }
    Ok(())
}

fn guard_classes(g: &FinGroup) -> Result<(), Failure> {
    if g.classes.len() > CLASS_CAP {
        return Err(usage(format!(
            "{} has {} conjugacy classes, above the table cap {CLASS_CAP}",
            g.name,
            g.classes.len()
        )));
    }
    Ok(())
}

fn built_ball(r: &Arc<ResidueRing>, cap: u64) -> Result<(Arc<FinGroup>, End), Failure> {
    guard("the boundary stabilizer", ball_order(r), cap)?;
    Ok(checks::ball_end(r))
}

fn built_far(r: &Arc<ResidueRing>, cap: u64) -> Result<(Arc<FinGroup>, End), Failure> {
    guard("the opposite stabilizer", opposite_order(r), cap)?;
    Ok(checks::far_end(r))
}

fn built_full(r: &Arc<ResidueRing>, cap: u64) -> Result<Arc<FinGroup>, Failure> {
    guard("the full matrix group", full_order(r), cap)?;
    let k = Arc::new(full_group(r));
    guard_classes(&k)?;
    Ok(k)
}

enum RepSpec {
    TypeUnramified,
    TypeRamified,
    UEps(usize),
    Irr(usize),
}

fn parse_rep(s: &str) -> Result<RepSpec, Failure> {
    if s == "type:unramified" {
        return Ok(RepSpec::TypeUnramified);
    }
    if s == "type:ramified" {
        return Ok(RepSpec::TypeRamified);
    }
    if let Some(k) = s.strip_prefix("u:eps=") {
        let k = k.parse().map_err(|_| usage(format!("bad index in {s:?}")))?;
        return Ok(RepSpec::UEps(k));
    }
    if let Some(k) = s.strip_prefix("irr:") {
        let k = k.parse().map_err(|_| usage(format!("bad row in {s:?}")))?;
        return Ok(RepSpec::Irr(k));
    }
    Err(usage(format!(
        "unknown representation spec {s:?}; use type:unramified, type:ramified, u:eps=<index>, irr:<row>"
    )))
}

fn exponent_n_unit_chars(r: &Arc<ResidueRing>) -> Vec<ClassFunction> {
    character_table(&unit_group(r))
        .into_iter()
        .filter(|e| unit_char_exponent(r, e) == r.n)
        .collect()
}

/// Resolves a representation spec to labelled characters on the full
/// group (or parahoric subgroup) together with the ends to report at.
fn conductor_entries(
    r: &Arc<ResidueRing>,
    spec: &RepSpec,
    cap: u64,
) -> Result<Vec<ConductorEntry>, Failure> {
    match spec {
        RepSpec::TypeUnramified => {
            let k = built_full(r, cap)?;
            let table = character_table(&k);
            let unit_table = character_table(&unit_group(r));
            let cands = unramified_candidates(r, &k, &table, &unit_table);
            let (ball, end) = built_ball(r, cap)?;
            Ok(cands
                .iter()
                .enumerate()
                .map(|(j, chi)| {
                    ConductorEntry::build(
                        &format!("type:unramified[{j}]"),
                        "near",
                        &end,
                        &chi.restrict_to(&ball),
                    )
                })
                .collect())
        }
        RepSpec::TypeRamified => {
            if r.n < 2 {
                return Err(usage("the parahoric family needs depth n >= 2"));
            }
            let k = built_full(r, cap)?;
            let kp = iwahori_subgroup(r, &k);
            guard_classes(&kp)?;
            let table = character_table(&kp);
            let cands = ramified_candidates(r, &kp, &table);
            let (ball, near) = built_ball(r, cap)?;
            let (opp, far) = built_far(r, cap)?;
            let mut entries = Vec::new();
            for (j, chi) in cands.iter().enumerate() {
                let label = format!("type:ramified[{j}]");
                entries.push(ConductorEntry::build(&label, "near", &near, &chi.restrict_to(&ball)));
                entries.push(ConductorEntry::build(&label, "far", &far, &chi.restrict_to(&opp)));
            }
            Ok(entries)
        }
        RepSpec::UEps(idx) => {
            let k = built_full(r, cap)?;
            let eps_list = exponent_n_unit_chars(r);
            let eps = eps_list.get(*idx).ok_or_else(|| {
                usage(format!(
                    "u:eps index {idx} out of range; {} character(s) of full exponent",
                    eps_list.len()
                ))
            })?;
            let u = u_char(r, &k, &borel_subgroup(r, &k), eps);
            let (ball, end) = built_ball(r, cap)?;
            Ok(vec![ConductorEntry::build(
                &format!("u:eps={idx}"),
                "near",
                &end,
                &u.restrict_to(&ball),
            )])
        }
        RepSpec::Irr(row) => {
            let k = built_full(r, cap)?;
            let table = character_table(&k);
            let chi = table.get(*row).ok_or_else(|| {
                usage(format!("irr row {row} out of range; table has {} rows", table.len()))
            })?;
            let (ball, end) = built_ball(r, cap)?;
            Ok(vec![ConductorEntry::build(
                &format!("irr:{row}"),
                "near",
                &end,
                &chi.restrict_to(&ball),
            )])
        }
    }
}

/// Resolves a representation spec to a single character restricted to the
/// boundary stabilizer, for profiling. Family specs take their first
/// member; the label says which.
fn profile_rep(
    r: &Arc<ResidueRing>,
    spec: &RepSpec,
    cap: u64,
) -> Result<(String, ClassFunction, End), Failure> {
    let (ball, end) = built_ball(r, cap)?;
    match spec {
        RepSpec::TypeUnramified => {
            let k = built_full(r, cap)?;
            let table = character_table(&k);
            let unit_table = character_table(&unit_group(r));
            let cands = unramified_candidates(r, &k, &table, &unit_table);
            let chi = cands.first().ok_or_else(|| usage("no full-level candidates on this ring"))?;
            Ok(("type:unramified[0]".to_string(), chi.restrict_to(&ball), end))
        }
        RepSpec::TypeRamified => {
            if r.n < 2 {
                return Err(usage("the parahoric family needs depth n >= 2"));
            }
            let k = built_full(r, cap)?;
            let kp = iwahori_subgroup(r, &k);
            guard_classes(&kp)?;
            let table = character_table(&kp);
            let cands = ramified_candidates(r, &kp, &table);
            let chi = cands.first().ok_or_else(|| usage("no parahoric candidates on this ring"))?;
            Ok(("type:ramified[0]".to_string(), chi.restrict_to(&ball), end))
        }
        RepSpec::UEps(idx) => {
            let k = built_full(r, cap)?;
            let eps_list = exponent_n_unit_chars(r);
            let eps = eps_list.get(*idx).ok_or_else(|| {
                usage(format!(
                    "u:eps index {idx} out of range; {} character(s) of full exponent",
                    eps_list.len()
                ))
            })?;
            let u = u_char(r, &k, &borel_subgroup(r, &k), eps);
            Ok((format!("u:eps={idx}"), u.restrict_to(&ball), end))
        }
        RepSpec::Irr(row) => {
            let k = built_full(r, cap)?;
            let table = character_table(&k);
            let chi = table.get(*row).ok_or_else(|| {
                usage(format!("irr row {row} out of range; table has {} rows", table.len()))
            })?;
            Ok((format!("irr:{row}"), chi.restrict_to(&ball), end))
        }
    }
}

fn run_target(r: &Arc<ResidueRing>, target: Target, cap: u64) -> Result<Vec<Check>, Failure> {
    let need_ball = |cap| guard("the boundary stabilizer", ball_order(r), cap);
    let need_full = |cap| guard("the full matrix group", full_order(r), cap);
    match target {
        Target::Jumps => {
            need_ball(cap)?;
            Ok(checks::jumps(r))
        }
        Target::Upper => {
            need_ball(cap)?;
            Ok(checks::upper(r))
        }
        Target::Unramified => {
            need_full(cap)?;
            need_ball(cap)?;
            Ok(checks::unramified(r))
        }
        Target::Ramified => {
            if r.n < 2 {
                return Err(usage("the ramified target needs depth n >= 2"));
            }
            need_full(cap)?;
            need_ball(cap)?;
            guard("the opposite stabilizer", opposite_order(r), cap)?;
            Ok(checks::ramified(r))
        }
        Target::Induced => {
            need_full(cap)?;
            need_ball(cap)?;
            Ok(checks::induced(r))
        }
        Target::InducedFixed => {
            need_full(cap)?;
            need_ball(cap)?;
            Ok(checks::induced_fixed(r))
        }
        Target::Valuations => {
            need_ball(cap)?;
            Ok(checks::valuations(r))
        }
        Target::Tower => Ok(checks::tower(r)),
        Target::Compose => Ok(checks::compose(r)),
        Target::All => {
            let mut order = vec![
                Target::Jumps,
                Target::Upper,
                Target::Unramified,
                Target::Induced,
                Target::InducedFixed,
                Target::Valuations,
                Target::Tower,
                Target::Compose,
            ];
            if r.n >= 2 {
                order.insert(3, Target::Ramified);
            }
            let mut all = Vec::new();
            for t in order {
                for c in run_target(r, t, cap)? {
                    all.push(Check { name: format!("{}: {}", t.name(), c.name), ..c });
                }
            }
            Ok(all)
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

fn emit<T: Serialize>(common: &Common, report: &T, csv_rows: Vec<Vec<String>>) -> Result<(), Failure> {
    let text = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::new();
            for row in csv_rows {
                let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
    };
    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Cmd::Filtration(c) => {
            let r = parse_ring(&c.ring)?;
            let (_, end) = built_ball(&r, c.cap)?;
            let report = FiltrationOut::build(&c.ring, &end);
            let csv = report.csv();
            emit(&c, &report, csv)
        }
        Cmd::Upper(c) => {
            let r = parse_ring(&c.ring)?;
            let (_, end) = built_ball(&r, c.cap)?;
            let report = UpperOut::build(&c.ring, &end);
            let csv = report.csv();
            emit(&c, &report, csv)
        }
        Cmd::Chartable(c) => {
            let r = parse_ring(&c.ring)?;
            let k = built_full(&r, c.cap)?;
            let table = character_table(&k);
            let report = CharTableOut::build(&c.ring, &k, &table);
            let csv = report.csv();
            emit(&c, &report, csv)
        }
        Cmd::Conductor { common: c, rep } => {
            let r = parse_ring(&c.ring)?;
            let spec = parse_rep(&rep)?;
            let entries = conductor_entries(&r, &spec, c.cap)?;
            let report =
                ConductorOut { ring: c.ring.clone(), rep, convention: CONVENTION, entries };
            let csv = report.csv();
            emit(&c, &report, csv)
        }
        Cmd::Profile { common: c, rep, s_max } => {
            let r = parse_ring(&c.ring)?;
            let spec = parse_rep(&rep)?;
            let s = parse_s_max(&s_max)?;
            let (label, chi, end) = profile_rep(&r, &spec, c.cap)?;
            let profile = sweep(&end.filt, &chi, &s);
            let report = ProfileOut::build(&c.ring, &label, &profile);
            let csv = report.csv();
            emit(&c, &report, csv)
        }
        Cmd::Verify { common: c, target } => {
            let r = parse_ring(&c.ring)?;
            let found = run_target(&r, target, c.cap)?;
            let ok = found.iter().all(|ch| ch.ok);
            let report = VerifyOut {
                ring: c.ring.clone(),
                target: target.name().to_string(),
                checks: found
                    .into_iter()
                    .map(|ch| CheckOut {
                        name: ch.name,
                        status: if ch.ok { "pass" } else { "fail" },
                        detail: ch.detail,
                    })
                    .collect(),
                status: if ok { "pass" } else { "fail" },
            };
            let csv = report.csv();
            emit(&c, &report, csv)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Cmd::Newton { common: c, check } => {
            let r = parse_ring(&c.ring)?;
            let q = r.q as u64;
            let n = r.n;
            match check {
                NewtonCheck::Valuations => {
                    let lv = level_valuations(q, n);
                    let model = ValuedPoly::model(q);
                    let polygon = PolygonOut::build(&model.points(), &lower_hull(&model));
                    guard("the boundary stabilizer", ball_order(&r), c.cap)?;
                    let ok = checks::valuations(&r).iter().all(|ch| ch.ok);
                    let report = ValuationsOut::build(&c.ring, q, n, &lv, polygon, ok);
                    let csv = report.csv();
                    emit(&c, &report, csv)?;
                    if ok { Ok(()) } else { Err(Failure::Verify) }
                }
                NewtonCheck::Tower => {
                    let t = eisenstein_tower(q, n);
                    let ok = checks::tower(&r).iter().all(|ch| ch.ok);
                    let report = TowerOut::build(&c.ring, q, n, &t);
                    let csv = report.csv();
                    emit(&c, &report, csv)?;
                    if ok { Ok(()) } else { Err(Failure::Verify) }
                }
                NewtonCheck::Compose => {
                    let ok = residue_factorization_check(q, n);
                    let report = ComposeOut { ring: c.ring.clone(), q, n, identity_holds: ok };
                    let csv = simple_csv(
                        &["q", "n", "identity_holds"],
                        vec![q.to_string(), n.to_string(), ok.to_string()],
                    );
                    emit(&c, &report, csv)?;
                    if ok { Ok(()) } else { Err(Failure::Verify) }
                }
                NewtonCheck::Stability => {
                    let stable = slope_stability(q, STABILITY_TRIALS, c.seed);
                    let report = StabilityOut {
                        ring: c.ring.clone(),
                        q,
                        n,
                        trials: STABILITY_TRIALS,
                        seed: c.seed,
                        stable,
                    };
                    let csv = simple_csv(
                        &["q", "n", "trials", "seed", "stable"],
                        vec![
                            q.to_string(),
                            n.to_string(),
                            STABILITY_TRIALS.to_string(),
                            c.seed.to_string(),
                            stable.to_string(),
                        ],
                    );
                    emit(&c, &report, csv)?;
                    if stable { Ok(()) } else { Err(Failure::Verify) }
                }
            }
        }
    }
}
