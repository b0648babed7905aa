//! Serializable report shapes and their CSV projections.
//!
//! JSON is the canonical format: every rational is rendered as an exact
//! "num/den" string (plain "num" when the denominator is one), so reports
//! round-trip losslessly. CSV is a flat convenience projection of the same
//! rows for spreadsheet use.

use serde::Serialize;
use swancore::classfn::ClassFunction;
use swancore::conductor::{Breaks, End};
use swancore::gl2::unpack;
use swancore::group::FinGroup;
use swancore::newton::{LevelValuations, NewtonPolygon, Tower, ValPair};
use swancore::profile::{Profile, Validity};
use swancore::Rat;

pub fn show(r: &Rat) -> String {
    r.to_string()
}

fn show_all(v: &[Rat]) -> Vec<String> {
    v.iter().map(show).collect()
}

fn show_pair(v: &ValPair) -> [String; 2] {
    [show(&v.0), show(&v.1)]
}

#[derive(Serialize)]
pub struct JumpOut {
    pub flat: String,
    pub sharp: i64,
    pub order: u64,
    pub subgroup: String,
}

#[derive(Serialize)]
pub struct FiltrationOut {
    pub ring: String,
    pub group: String,
    pub group_order: u64,
    pub jumps: Vec<JumpOut>,
}

impl FiltrationOut {
    pub fn build(ring: &str, end: &End) -> Self {
        let filt = &end.filt;
        let jumps = filt
            .jumps
            .iter()
            .enumerate()
            .map(|(i, j)| JumpOut {
                flat: show(&j.pair.flat),
                sharp: j.pair.sharp,
                order: j.subgroup_order,
                subgroup: format!("level {}", i + 1),
            })
            .collect();
        FiltrationOut {
            ring: ring.to_string(),
            group: filt.group.name.clone(),
            group_order: filt.group.order() as u64,
            jumps,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "flat".into(),
            "sharp".into(),
            "order".into(),
            "subgroup".into(),
        ]];
        for j in &self.jumps {
            rows.push(vec![
                j.flat.clone(),
                j.sharp.to_string(),
                j.order.to_string(),
                j.subgroup.clone(),
            ]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct UpperJumpOut {
    pub flat: String,
    pub sharp: String,
    pub order: u64,
    pub subgroup: String,
}

#[derive(Serialize)]
pub struct UpperOut {
    pub ring: String,
    pub group: String,
    pub group_order: u64,
    pub jumps: Vec<UpperJumpOut>,
}

impl UpperOut {
    pub fn build(ring: &str, end: &End) -> Self {
        let filt = &end.filt;
        let jumps = filt
            .upper_jumps()
            .iter()
            .zip(&filt.jumps)
            .enumerate()
            .map(|(i, (u, j))| UpperJumpOut {
                flat: show(&u.flat),
                sharp: show(&u.sharp),
                order: j.subgroup_order,
                subgroup: format!("level {}", i + 1),
            })
            .collect();
        UpperOut {
            ring: ring.to_string(),
            group: filt.group.name.clone(),
            group_order: filt.group.order() as u64,
            jumps,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "flat".into(),
            "sharp".into(),
            "order".into(),
            "subgroup".into(),
        ]];
        for j in &self.jumps {
            rows.push(vec![
                j.flat.clone(),
                j.sharp.clone(),
                j.order.to_string(),
                j.subgroup.clone(),
            ]);
        }
        rows
    }
}

/// Class representatives are ring element indices packed row-major, the
/// same encoding the group uses internally.
#[derive(Serialize)]
pub struct ClassOut {
    pub rep: [[u16; 2]; 2],
    pub size: u64,
}

#[derive(Serialize)]
pub struct ValueOut {
    pub m: u32,
    pub coeffs: Vec<String>,
}

#[derive(Serialize)]
pub struct IrreducibleOut {
    pub dim: u64,
    pub values: Vec<ValueOut>,
}

#[derive(Serialize)]
pub struct CharTableOut {
    pub ring: String,
    pub group: String,
    pub classes: Vec<ClassOut>,
    pub irreducibles: Vec<IrreducibleOut>,
}

impl CharTableOut {
    pub fn build(ring: &str, group: &FinGroup, table: &[ClassFunction]) -> Self {
        let classes = group
            .classes
            .iter()
            .map(|c| {
                let [a, b, cc, d] = unpack(c.rep);
                ClassOut { rep: [[a, b], [cc, d]], size: c.size() as u64 }
            })
            .collect();
        let irreducibles = table
            .iter()
            .map(|chi| IrreducibleOut {
                dim: chi
                    .degree()
                    .to_integer()
                    .try_into()
                    .expect("irreducible dimensions are small nonnegative integers"),
                values: chi
                    .class_values()
                    .iter()
                    .map(|v| ValueOut { m: v.m, coeffs: show_all(v.coeffs()) })
                    .collect(),
            })
            .collect();
        CharTableOut {
            ring: ring.to_string(),
            group: group.name.clone(),
            classes,
            irreducibles,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["row".into(), "dim".into(), "class_sizes".into()]];
        let sizes: Vec<String> = self.classes.iter().map(|c| c.size.to_string()).collect();
        let sizes = sizes.join(" ");
        for (i, irr) in self.irreducibles.iter().enumerate() {
            rows.push(vec![i.to_string(), irr.dim.to_string(), sizes.clone()]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct RouteOut {
    pub sw: String,
    pub delta: String,
}

#[derive(Serialize)]
pub struct BreaksOut {
    pub sw: String,
    pub delta: String,
    pub fixed_dims: Vec<String>,
    pub break_dims: Vec<String>,
}

#[derive(Serialize)]
pub struct ConductorEntry {
    pub label: String,
    pub end: String,
    pub pairing: RouteOut,
    pub breaks: BreaksOut,
    pub routes_agree: bool,
}

impl ConductorEntry {
    pub fn build(label: &str, end_name: &str, end: &End, chi_on_end: &ClassFunction) -> Self {
        let (sw, delta) = end.pairing_conductor(chi_on_end);
        let b: Breaks = end.break_conductor(chi_on_end);
        let routes_agree = sw == b.sw && delta == b.delta;
        ConductorEntry {
            label: label.to_string(),
            end: end_name.to_string(),
            pairing: RouteOut { sw: show(&sw), delta: show(&delta) },
            breaks: BreaksOut {
                sw: show(&b.sw),
                delta: show(&b.delta),
                fixed_dims: show_all(&b.fixed_dims),
                break_dims: show_all(&b.break_dims),
            },
            routes_agree,
        }
    }
}

/// Normalization notes carried on every conductor report so the numbers
/// are interpretable without the source.
#[derive(Serialize)]
pub struct Convention {
    pub sw: &'static str,
    pub delta: &'static str,
    pub pairing_route: &'static str,
    pub break_route: &'static str,
}

pub const CONVENTION: Convention = Convention {
    sw: "wild conductor; nonpositive for restrictions from the ambient matrix group, zero on tame classes",
    delta: "discriminant conductor; always nonnegative",
    pairing_route: "inner product of the character with the conductor class functions",
    break_route: "upper numbering jump values weighted by break dimensions",
};

#[derive(Serialize)]
pub struct ConductorOut {
    pub ring: String,
    pub rep: String,
    pub convention: Convention,
    pub entries: Vec<ConductorEntry>,
}

impl ConductorOut {
    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "label".into(),
            "end".into(),
            "sw".into(),
            "delta".into(),
            "break_sw".into(),
            "break_delta".into(),
            "routes_agree".into(),
        ]];
        for e in &self.entries {
            rows.push(vec![
                e.label.clone(),
                e.end.clone(),
                e.pairing.sw.clone(),
                e.pairing.delta.clone(),
                e.breaks.sw.clone(),
                e.breaks.delta.clone(),
                e.routes_agree.to_string(),
            ]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct PieceOut {
    pub s_lo: String,
    pub s_hi: String,
    pub delta_intercept: String,
    pub delta_slope: String,
    pub sw: String,
}

#[derive(Serialize)]
pub struct ProfileOut {
    pub ring: String,
    pub rep: String,
    pub s_max: String,
    pub breakpoints: Vec<String>,
    pub pieces: Vec<PieceOut>,
    pub validity: String,
    pub first_departure: Option<String>,
}

impl ProfileOut {
    pub fn build(ring: &str, rep: &str, profile: &Profile) -> Self {
        let breakpoints = profile.pieces.iter().skip(1).map(|p| show(&p.start)).collect();
        let pieces = profile
            .pieces
            .iter()
            .map(|p| PieceOut {
                s_lo: show(&p.start),
                s_hi: show(&p.end),
                delta_intercept: show(&p.delta_start),
                delta_slope: show(&p.slope),
                sw: show(&p.sw),
            })
            .collect();
        let validity = match &profile.validity {
            Validity::Full => "full".to_string(),
            Validity::StructuralBreak { at } => format!("structural break at {}", show(at)),
        };
        ProfileOut {
            ring: ring.to_string(),
            rep: rep.to_string(),
            s_max: show(&profile.s_max),
            breakpoints,
            pieces,
            validity,
            first_departure: profile.first_departure.as_ref().map(show),
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec![
            "s_lo".into(),
            "s_hi".into(),
            "delta_intercept".into(),
            "delta_slope".into(),
            "sw".into(),
        ]];
        for p in &self.pieces {
            rows.push(vec![
                p.s_lo.clone(),
                p.s_hi.clone(),
                p.delta_intercept.clone(),
                p.delta_slope.clone(),
                p.sw.clone(),
            ]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct PointOut {
    pub degree: u64,
    pub val: [String; 2],
}

#[derive(Serialize)]
pub struct SegmentOut {
    pub slope: [String; 2],
    pub length: u64,
}

#[derive(Serialize)]
pub struct PolygonOut {
    pub points: Vec<PointOut>,
    pub hull: Vec<PointOut>,
    pub slopes: Vec<SegmentOut>,
}

impl PolygonOut {
    pub fn build(points: &[(u64, ValPair)], hull: &NewtonPolygon) -> Self {
        let as_out =
            |pts: &[(u64, ValPair)]| -> Vec<PointOut> {
                pts.iter().map(|(d, v)| PointOut { degree: *d, val: show_pair(v) }).collect()
            };
        PolygonOut {
            points: as_out(points),
            hull: as_out(&hull.vertices),
            slopes: hull
                .segments
                .iter()
                .map(|s| SegmentOut { slope: show_pair(&s.slope), length: s.length })
                .collect(),
        }
    }
}

#[derive(Serialize)]
pub struct LevelOut {
    pub flat: String,
    pub raw_sharp: i64,
    pub normalized_sharp: i64,
}

#[derive(Serialize)]
pub struct ValuationsOut {
    pub ring: String,
    pub q: u64,
    pub n: u32,
    pub levels: Vec<LevelOut>,
    pub v_normalized_sharps: Vec<i64>,
    pub polygon: PolygonOut,
    pub matches_filtration: bool,
}

impl ValuationsOut {
    pub fn build(
        ring: &str,
        q: u64,
        n: u32,
        lv: &LevelValuations,
        polygon: PolygonOut,
        matches_filtration: bool,
    ) -> Self {
        ValuationsOut {
            ring: ring.to_string(),
            q,
            n,
            levels: lv
                .levels
                .iter()
                .map(|l| LevelOut {
                    flat: show(&l.flat),
                    raw_sharp: l.raw_sharp,
                    normalized_sharp: l.normalized_sharp,
                })
                .collect(),
            v_normalized_sharps: lv.v_normalized_sharps.clone(),
            polygon,
            matches_filtration,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows =
            vec![vec!["level".into(), "flat".into(), "raw_sharp".into(), "normalized_sharp".into()]];
        for (m, l) in self.levels.iter().enumerate() {
            rows.push(vec![
                (m + 1).to_string(),
                l.flat.clone(),
                l.raw_sharp.to_string(),
                l.normalized_sharp.to_string(),
            ]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct TowerStepOut {
    pub degree: u64,
    pub z_val: String,
}

#[derive(Serialize)]
pub struct TowerOut {
    pub ring: String,
    pub q: u64,
    pub n: u32,
    pub steps: Vec<TowerStepOut>,
    pub total_degree: u64,
}

impl TowerOut {
    pub fn build(ring: &str, q: u64, n: u32, tower: &Tower) -> Self {
        TowerOut {
            ring: ring.to_string(),
            q,
            n,
            steps: tower
                .steps
                .iter()
                .map(|s| TowerStepOut { degree: s.degree, z_val: show(&s.z_val) })
                .collect(),
            total_degree: tower.total_degree,
        }
    }

    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["step".into(), "degree".into(), "z_val".into()]];
        for (m, s) in self.steps.iter().enumerate() {
            rows.push(vec![(m + 1).to_string(), s.degree.to_string(), s.z_val.clone()]);
        }
        rows
    }
}

#[derive(Serialize)]
pub struct ComposeOut {
    pub ring: String,
    pub q: u64,
    pub n: u32,
    pub identity_holds: bool,
}

#[derive(Serialize)]
pub struct StabilityOut {
    pub ring: String,
    pub q: u64,
    pub n: u32,
    pub trials: u32,
    pub seed: u64,
    pub stable: bool,
}

#[derive(Serialize)]
pub struct CheckOut {
    pub name: String,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Serialize)]
pub struct VerifyOut {
    pub ring: String,
    pub target: String,
    pub checks: Vec<CheckOut>,
    pub status: &'static str,
}

impl VerifyOut {
    pub fn csv(&self) -> Vec<Vec<String>> {
        let mut rows = vec![vec!["name".into(), "status".into(), "detail".into()]];
        for c in &self.checks {
            rows.push(vec![c.name.clone(), c.status.to_string(), c.detail.clone()]);
        }
        rows.push(vec!["overall".into(), self.status.to_string(), String::new()]);
        rows
    }
}

pub fn simple_csv(header: &[&str], row: Vec<String>) -> Vec<Vec<String>> {
    vec![header.iter().map(|s| s.to_string()).collect(), row]
}
