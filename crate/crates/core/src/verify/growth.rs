use std::fmt::{self, Display, Write as _};

use crate::algebra::{generate_subalgebra_with, holds_bounded, in_vn_with, FiniteAlgebra};
use crate::budget::{Budget, Progress};
use crate::constructions::{
    adjoin_zero, automatic_from_action, automatic_from_zero_adjoined, build_action_algebra, build_b, in_vn_star,
    square, star, BuildB, BuildBConfig, Prover,
};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, GroupAction};

/// Which finite-variety witness a growth row measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// `B(n, ℓ)*`, `n + 1`-generated.
    Star,
    /// `(B(n, ℓ)⁰)*`, `n + 2`-generated.
    Zero,
    /// The automatic algebra of `B(k, ℓ)⁰`, `k + 4`-generated.
    Automatic,
}

impl Flavor {
    pub fn parse(s: &str) -> Result<Flavor> {
        match s {
            "star" => Ok(Flavor::Star),
            "zero" => Ok(Flavor::Zero),
            "automatic" => Ok(Flavor::Automatic),
            other => Err(Error::Syntax {
                pos: 0,
                msg: format!("unknown flavor `{other}` (star, zero, automatic)"),
            }),
        }
    }
}

impl Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Star => "star",
            Flavor::Zero => "zero",
            Flavor::Automatic => "automatic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelOutcome {
    NotRun,
    Passed(String),
    Failed(String),
    Skipped(String),
}

impl LevelOutcome {
    fn code(&self) -> &'static str {
        match self {
            LevelOutcome::NotRun => "-",
            LevelOutcome::Passed(_) => "pass",
            LevelOutcome::Failed(_) => "fail",
            LevelOutcome::Skipped(_) => "skip",
        }
    }

    pub fn passed(&self) -> bool {
        matches!(self, LevelOutcome::Passed(_))
    }

    pub fn failed(&self) -> bool {
        matches!(self, LevelOutcome::Failed(_))
    }

    fn from_result(r: Result<(bool, String)>) -> LevelOutcome {
        match r {
            Ok((true, d)) => LevelOutcome::Passed(d),
            Ok((false, d)) => LevelOutcome::Failed(d),
            Err(e @ Error::BudgetExceeded { .. }) => LevelOutcome::Skipped(e.to_string()),
            Err(e) => LevelOutcome::Failed(e.to_string()),
        }
    }
}

impl Display for LevelOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelOutcome::NotRun => f.write_str("not run"),
            LevelOutcome::Passed(d) => write!(f, "pass ({d})"),
            LevelOutcome::Failed(d) => write!(f, "FAIL ({d})"),
            LevelOutcome::Skipped(d) => write!(f, "skipped ({d})"),
        }
    }
}

/// Verification levels, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Level {
    Full,
    Structural,
    Bounded,
}

impl Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Full => "full",
            Level::Structural => "structural",
            Level::Bounded => "bounded",
        })
    }
}

#[derive(Clone, Debug)]
pub struct GrowthConfig {
    pub n: usize,
    pub ells: Vec<usize>,
    pub flavor: Flavor,
    pub p: u64,
    pub q: u64,
    /// Witness parameter of the automatic flavor.
    pub k: usize,
    pub m_max: usize,
    /// Rows (from the first) that get the exhaustive membership test.
    pub full_rows: usize,
    pub bounded: bool,
    pub budget: Budget,
    /// Generator action `(G, S)`; `A(G, S)` and its relatives are the
    /// generating algebras.
    pub action: GroupAction,
}

impl GrowthConfig {
    /// `S3` on three points, `p = 3`, `q = 2`, `k = 2`.
    pub fn new(n: usize, ells: Vec<usize>, flavor: Flavor) -> GrowthConfig {
        GrowthConfig {
            n,
            ells,
            flavor,
            p: 3,
            q: 2,
            k: 2,
            m_max: 3,
            full_rows: 1,
            bounded: true,
            budget: Budget::default(),
            action: FiniteGroup::symmetric(3).1,
        }
    }

    pub fn generators(&self) -> usize {
        match self.flavor {
            Flavor::Star => self.n + 1,
            Flavor::Zero => self.n + 2,
            Flavor::Automatic => self.k + 4,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GrowthRow {
    pub n: usize,
    pub d: usize,
    pub ell: usize,
    pub size: usize,
    /// Nilpotency class chosen for `B(·, ℓ)`.
    pub c: usize,
    /// The witness is generated by `d` explicit elements.
    pub generated: bool,
    pub full: LevelOutcome,
    pub structural: LevelOutcome,
    pub bounded: LevelOutcome,
}

impl GrowthRow {
    /// The strongest level that passed.
    pub fn level(&self) -> Option<Level> {
        [
            (Level::Full, &self.full),
            (Level::Structural, &self.structural),
            (Level::Bounded, &self.bounded),
        ]
        .into_iter()
        .find(|(_, o)| o.passed())
        .map(|(l, _)| l)
    }

    /// `d`-generated, at least `ℓ` elements, no level failed and some passed.
    pub fn passes(&self) -> bool {
        self.generated
            && self.size >= self.ell
            && !(self.full.failed() || self.structural.failed() || self.bounded.failed())
            && self.level().is_some()
    }
}

/// The witness algebra of one row together with the data the levels need.
struct Witness {
    b: BuildB,
    algebra: FiniteAlgebra,
    generators: Vec<usize>,
}

fn witness(cfg: &GrowthConfig, ell: usize) -> Result<Witness> {
    let bn = if cfg.flavor == Flavor::Automatic { cfg.k } else { cfg.n };
    let mut bc = BuildBConfig::new(bn, ell, cfg.p, cfg.q);
    bc.budget = cfg.budget;
    let b = build_b(&bc)?;
    let one = b.p_group.identity();
    let (nx, _) = b.algebra.sizes();
    match cfg.flavor {
        Flavor::Star => {
            let w = star(&b.algebra.algebra)?;
            let generators = (0..nx).map(|i| w.pair(i, one)).collect();
            Ok(Witness { algebra: w.algebra, generators, b })
        }
        Flavor::Zero => {
            let b0 = adjoin_zero(&b.algebra.algebra)?;
            let (z1, z2) = b0.zeros.expect("zero adjoined");
            let w = star(&b0.algebra)?;
            let mut generators: Vec<usize> = (0..nx).map(|i| w.pair(i, one)).collect();
            generators.push(w.pair(z1, z2));
            Ok(Witness { algebra: w.algebra, generators, b })
        }
        Flavor::Automatic => {
            let b0 = adjoin_zero(&b.algebra.algebra)?;
            let c = automatic_from_zero_adjoined(&b0)?;
            let mut generators: Vec<usize> = (0..c.g_size).collect();
            generators.push(c.g_size + one);
            generators.push(c.zero());
            Ok(Witness { algebra: c.algebra, generators, b })
        }
    }
}

/// Generating algebra on the witness side: `A*`, `(A⁰)*` or `Auto(G, S)`.
fn generating_algebra(cfg: &GrowthConfig) -> Result<FiniteAlgebra> {
    let g = cfg.action.group();
    let a = build_action_algebra(g, &cfg.action)?;
    Ok(match cfg.flavor {
        Flavor::Star => star(&a.algebra)?.algebra,
        Flavor::Zero => star(&adjoin_zero(&a.algebra)?.algebra)?.algebra,
        Flavor::Automatic => automatic_from_action(&cfg.action)?.algebra,
    })
}

fn full_level(cfg: &GrowthConfig, w: &FiniteAlgebra, a: &FiniteAlgebra, progress: &dyn Progress) -> Result<(bool, String)> {
    let out = match cfg.flavor {
        Flavor::Star | Flavor::Zero => in_vn_star(w, a, cfg.n, &cfg.budget, progress)?,
        Flavor::Automatic => in_vn_with(w, a, &[cfg.n], &cfg.budget, progress)?,
    };
    let detail = format!("{} choices, {} distinct subalgebras", out.choices, out.distinct);
    Ok((out.member, detail))
}

fn structural_level(cfg: &GrowthConfig, w: &Witness, progress: &dyn Progress) -> Result<(bool, String)> {
    let prover = Prover::new(&w.b, &cfg.action, cfg.m_max, cfg.budget)?;
    let zero = cfg.flavor != Flavor::Star;
    let s = prover.sweep(cfg.n, zero, progress)?;
    let mut detail = format!(
        "{} subalgebras: {} structural, {} null, {} generic, {} undecided",
        s.subalgebras,
        s.structural,
        s.null,
        s.generic,
        s.undecided.len()
    );
    if let Some((_, why)) = s.undecided.first() {
        let _ = write!(detail, "; first undecided: {why}");
    }
    Ok((s.all_decided(), detail))
}

fn bounded_level(cfg: &GrowthConfig, w: &FiniteAlgebra, a: &FiniteAlgebra, progress: &dyn Progress) -> Result<(bool, String)> {
    let r = match cfg.flavor {
        Flavor::Star | Flavor::Zero => {
            let (ws, as_) = (square(w)?, square(a)?);
            holds_bounded(&ws.algebra, &as_.algebra, &[cfg.n, cfg.n], &cfg.budget, progress)?
        }
        Flavor::Automatic => holds_bounded(w, a, &[cfg.n], &cfg.budget, progress)?,
    };
    let mut detail = format!("{} assignments, free algebra sizes {:?}", r.assignments, r.free_sizes);
    if let Some((id, _)) = &r.counterexample {
        let _ = write!(detail, "; violated: {id:?}");
    }
    Ok((r.holds(), detail))
}

/// One row per `ℓ`. The first `full_rows` rows get the exhaustive
/// membership test, the others the structural sweep; every row gets the
/// bounded identity check, computed once per distinct witness.
pub fn growth_experiment(cfg: &GrowthConfig, progress: &dyn Progress) -> Result<Vec<GrowthRow>> {
    let a = generating_algebra(cfg)?;
    let d = cfg.generators();
    let mut rows: Vec<GrowthRow> = Vec::new();
    let mut seen: Vec<(usize, FiniteAlgebra)> = Vec::new();
    for (i, &ell) in cfg.ells.iter().enumerate() {
        let w = witness(cfg, ell)?;
        let size = w.algebra.total_size();
        let gen = generate_subalgebra_with(&w.algebra, &[w.generators.clone()], &cfg.budget)?;
        let generated = w.generators.len() <= d && gen.total_size() == size;
        let earlier = seen.iter().position(|(_, alg)| *alg == w.algebra);
        let (full, structural) = if i < cfg.full_rows {
            (LevelOutcome::from_result(full_level(cfg, &w.algebra, &a, progress)), LevelOutcome::NotRun)
        } else {
            (LevelOutcome::NotRun, LevelOutcome::from_result(structural_level(cfg, &w, progress)))
        };
        let bounded = match (cfg.bounded, earlier) {
            (false, _) => LevelOutcome::NotRun,
            (true, Some(j)) => match &rows[j].bounded {
                LevelOutcome::Passed(_) => LevelOutcome::Passed(format!("same witness as l={}", seen[j].0)),
                other => other.clone(),
            },
            (true, None) => LevelOutcome::from_result(bounded_level(cfg, &w.algebra, &a, progress)),
        };
        rows.push(GrowthRow {
            n: cfg.n,
            d,
            ell,
            size,
            c: w.b.c,
            generated,
            full,
            structural,
            bounded,
        });
        seen.push((ell, w.algebra));
    }
    Ok(rows)
}

/// `n,d,ell,size,c,generated,full,structural,bounded,level`, one line per
/// row. Contains no timings.
pub fn growth_csv(rows: &[GrowthRow]) -> String {
    let mut out = String::from("n,d,ell,size,c,generated,full,structural,bounded,level\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.d,
            r.ell,
            r.size,
            r.c,
            r.generated,
            r.full.code(),
            r.structural.code(),
            r.bounded.code(),
            r.level().map_or("none".to_string(), |l| l.to_string())
        );
    }
    out
}

/// Human-readable rows with the level details.
pub fn render_growth(cfg: &GrowthConfig, rows: &[GrowthRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "growth flavor={} n={} p={} q={} d={}",
        cfg.flavor,
        cfg.n,
        cfg.p,
        cfg.q,
        cfg.generators()
    );
    for r in rows {
        let _ = writeln!(out, "l={} size={} c={} generated={}", r.ell, r.size, r.c, r.generated);
        let _ = writeln!(out, "   full: {}", r.full);
        let _ = writeln!(out, "   structural: {}", r.structural);
        let _ = writeln!(out, "   bounded: {}", r.bounded);
    }
    let sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    let increasing = sizes.windows(2).all(|w| w[0] < w[1]);
    let _ = writeln!(out, "sizes {:?} strictly increasing: {}", sizes, increasing);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Silent;

    #[test]
    fn automatic_rows_without_bounded() {
        let mut cfg = GrowthConfig::new(2, vec![4, 8], Flavor::Automatic);
        cfg.bounded = false;
        cfg.full_rows = 0;
        let rows = growth_experiment(&cfg, &Silent).unwrap();
        assert_eq!(rows.len(), 2);
        for r in &rows {
            assert_eq!(r.d, 6);
            assert!(r.generated);
            assert!(r.structural.passed(), "{}", r.structural);
        }
        let csv = growth_csv(&rows);
        assert!(csv.starts_with("n,d,ell"));
        assert_eq!(csv.lines().count(), 3);
    }
}
