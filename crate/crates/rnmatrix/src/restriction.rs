//! Restricted non-deterministic matrices: a base matrix plus a set of named
//! restriction predicates over valuations. Restrictions quantify over the
//! instances present in the closure under check; all of them are structural
//! (closed under substitution), which `check_structurality` can confirm for
//! any composed valuation.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::{Closure, Formula, ModalIndex, Node, Substitution};
use crate::matrix::{matrix_for, MatrixSpec, SystemName};
use crate::valuation::{enumerate_valuations, Valuation, Verdict};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// v2(A->B) <= v2(A) => v2(B)
    K,
    /// v2(A) <= v1(A)
    T,
    /// v2(A) <= v2(#A)
    Four,
    /// v2(#A -> A) <= v2(A)
    Gl,
    /// v2(~A) = 1 - v3(A)   (makes #2 A <-> ~#1 ~A valid)
    Dual21,
    /// v3(~A) = 1 - v2(A)   (makes #1 A <-> ~#2 ~A valid)
    Dual12,
    /// v2(A) <= v3(A)       (makes #1 A -> #2 A valid)
    Mono12,
    /// v1(A) <= v2(#2 A)    (makes A -> #1 #2 A valid)
    Intro12,
    /// v3(A) <= v2(#2 A)    (makes #2 A -> #1 #2 A valid)
    Nest212,
    /// v3(#1 A) <= v2(#2 A) (makes #2 #1 A -> #1 #2 A valid)
    Swap,
    /// Pins v2 of one named variable to 1. Deliberately non-structural;
    /// exists so the structurality check has a negative control.
    ForcedModalVar(String),
}

impl Restriction {
    pub fn needs_bimodal(&self) -> bool {
        matches!(
            self,
            Restriction::Dual21
                | Restriction::Dual12
                | Restriction::Mono12
                | Restriction::Intro12
                | Restriction::Nest212
                | Restriction::Swap
        )
    }

    pub fn needs_unimodal(&self) -> bool {
        matches!(
            self,
            Restriction::K | Restriction::T | Restriction::Four | Restriction::Gl
        )
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Restriction::K => write!(f, "K"),
            Restriction::T => write!(f, "T"),
            Restriction::Four => write!(f, "4"),
            Restriction::Gl => write!(f, "GL"),
            Restriction::Dual21 => write!(f, "dual21"),
            Restriction::Dual12 => write!(f, "dual12"),
            Restriction::Mono12 => write!(f, "mono12"),
            Restriction::Intro12 => write!(f, "intro12"),
            Restriction::Nest212 => write!(f, "nest212"),
            Restriction::Swap => write!(f, "swap"),
            Restriction::ForcedModalVar(v) => write!(f, "forced({v})"),
        }
    }
}

impl FromStr for Restriction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Restriction> {
        match s.trim().to_ascii_lowercase().as_str() {
            "k" => Ok(Restriction::K),
            "t" => Ok(Restriction::T),
            "4" => Ok(Restriction::Four),
            "gl" => Ok(Restriction::Gl),
            "dual21" | "duality21" => Ok(Restriction::Dual21),
            "dual12" | "duality12" => Ok(Restriction::Dual12),
            "mono12" | "mono" => Ok(Restriction::Mono12),
            "intro12" => Ok(Restriction::Intro12),
            "nest212" => Ok(Restriction::Nest212),
            "swap" => Ok(Restriction::Swap),
            other => Err(Error::UnknownAxiom(other.to_string())),
        }
    }
}

/// A base matrix with restriction predicates layered on top.
#[derive(Clone, Debug)]
pub struct RnSystem {
    base: MatrixSpec,
    restrictions: Vec<Restriction>,
}

impl RnSystem {
    pub fn new(base: MatrixSpec, restrictions: Vec<Restriction>) -> Result<RnSystem> {
        for r in &restrictions {
            if r.needs_bimodal() && !base.is_bimodal() {
                return Err(Error::SignatureMismatch {
                    context: format!("restriction {r} needs a bimodal base, got {}", base.name()),
                });
            }
            if r.needs_unimodal() && base.is_bimodal() {
                return Err(Error::SignatureMismatch {
                    context: format!("restriction {r} needs a unimodal base, got {}", base.name()),
                });
            }
        }
        Ok(RnSystem { base, restrictions })
    }

    pub fn rn_k() -> RnSystem {
        RnSystem::new(matrix_for(SystemName::M), vec![Restriction::K]).unwrap()
    }

    pub fn rn_kt() -> RnSystem {
        RnSystem::new(matrix_for(SystemName::M), vec![Restriction::K, Restriction::T]).unwrap()
    }

    pub fn rn_kt4() -> RnSystem {
        RnSystem::new(
            matrix_for(SystemName::M),
            vec![Restriction::K, Restriction::T, Restriction::Four],
        )
        .unwrap()
    }

    pub fn rn_gl() -> RnSystem {
        RnSystem::new(matrix_for(SystemName::M), vec![Restriction::K, Restriction::Gl]).unwrap()
    }

    pub fn base(&self) -> &MatrixSpec {
        &self.base
    }

    pub fn restrictions(&self) -> &[Restriction] {
        &self.restrictions
    }

    pub fn has(&self, r: &Restriction) -> bool {
        self.restrictions.contains(r)
    }
}

impl fmt::Display for RnSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.restrictions.iter().map(|r| r.to_string()).collect();
        write!(f, "RN({}; {})", self.base.name(), names.join(","))
    }
}

/// One restriction instance with its closure positions resolved, so the hot
/// loop is index arithmetic only.
#[derive(Clone, Debug)]
enum Check {
    ImpK { f: usize, a: usize, b: usize },
    Truth { f: usize },
    Four { f: usize, a: usize },
    Gl { f: usize, a: usize },
    Dual21 { f: usize, a: usize },
    Dual12 { f: usize, a: usize },
    Mono12 { f: usize },
    Intro12 { f: usize, a: usize },
    Nest212 { f: usize, a: usize },
    Swap { m1: usize, m2: usize },
    Forced { f: usize },
}

impl Check {
    fn holds(&self, v: &Valuation) -> bool {
        let imp = |x: bool, y: bool| !x || y;
        match *self {
            Check::ImpK { f, a, b } => imp(
                v.snapshot_at(f).modal1(),
                imp(v.snapshot_at(a).modal1(), v.snapshot_at(b).modal1()),
            ),
            Check::Truth { f } => imp(v.snapshot_at(f).modal1(), v.snapshot_at(f).truth()),
            Check::Four { f, a } => imp(v.snapshot_at(a).modal1(), v.snapshot_at(f).modal1()),
            Check::Gl { f, a } => imp(v.snapshot_at(f).modal1(), v.snapshot_at(a).modal1()),
            Check::Dual21 { f, a } => v.snapshot_at(f).modal1() != v.snapshot_at(a).modal2(),
            Check::Dual12 { f, a } => v.snapshot_at(f).modal2() != v.snapshot_at(a).modal1(),
            Check::Mono12 { f } => imp(v.snapshot_at(f).modal1(), v.snapshot_at(f).modal2()),
            Check::Intro12 { f, a } => imp(v.snapshot_at(a).truth(), v.snapshot_at(f).modal1()),
            Check::Nest212 { f, a } => imp(v.snapshot_at(a).modal2(), v.snapshot_at(f).modal1()),
            Check::Swap { m1, m2 } => imp(v.snapshot_at(m1).modal2(), v.snapshot_at(m2).modal1()),
            Check::Forced { f } => v.snapshot_at(f).modal1(),
        }
    }
}

fn compile(restrictions: &[Restriction], closure: &Closure) -> Vec<Check> {
    let mut checks = Vec::new();
    for r in restrictions {
        match r {
            Restriction::K => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Imp(a, b) = n {
                        checks.push(Check::ImpK { f: i, a: *a, b: *b });
                    }
                }
            }
            Restriction::T => {
                for i in 0..closure.len() {
                    checks.push(Check::Truth { f: i });
                }
            }
            Restriction::Four => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Mod(ModalIndex::One, a) = n {
                        checks.push(Check::Four { f: i, a: *a });
                    }
                }
            }
            Restriction::Gl => {
                // instances of shape #A -> A
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Imp(a, b) = n {
                        if closure.node(*a) == &Node::Mod(ModalIndex::One, *b) {
                            checks.push(Check::Gl { f: i, a: *b });
                        }
                    }
                }
            }
            Restriction::Dual21 => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Neg(a) = n {
                        checks.push(Check::Dual21 { f: i, a: *a });
                    }
                }
            }
            Restriction::Dual12 => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Neg(a) = n {
                        checks.push(Check::Dual12 { f: i, a: *a });
                    }
                }
            }
            Restriction::Mono12 => {
                for i in 0..closure.len() {
                    checks.push(Check::Mono12 { f: i });
                }
            }
            Restriction::Intro12 => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Mod(ModalIndex::Two, a) = n {
                        checks.push(Check::Intro12 { f: i, a: *a });
                    }
                }
            }
            Restriction::Nest212 => {
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Mod(ModalIndex::Two, a) = n {
                        checks.push(Check::Nest212 { f: i, a: *a });
                    }
                }
            }
            Restriction::Swap => {
                // pairs #1 A / #2 A over the same A
                for (i, n) in closure.nodes().iter().enumerate() {
                    if let Node::Mod(ModalIndex::One, a) = n {
                        let twin = Formula::mod2(closure.formula(*a).clone());
                        if let Some(j) = closure.position(&twin) {
                            checks.push(Check::Swap { m1: i, m2: j });
                        }
                    }
                }
            }
            Restriction::ForcedModalVar(name) => {
                if let Some(i) = closure.position(&Formula::var(name.clone())) {
                    checks.push(Check::Forced { f: i });
                }
            }
        }
    }
    checks
}

/// Evaluates the system's restrictions against a valuation over its own
/// closure.
pub fn restrictions_hold(sys: &RnSystem, v: &Valuation) -> bool {
    let checks = compile(&sys.restrictions, v.closure());
    checks.iter().all(|c| c.holds(v))
}

/// Stream of base-legal valuations that satisfy every restriction, in the
/// order inherited from the base enumeration.
pub fn enumerate_restricted<'a>(
    sys: &'a RnSystem,
    closure: &Arc<Closure>,
    free_bits_cap: f64,
) -> Result<impl Iterator<Item = Valuation> + 'a> {
    let checks = compile(&sys.restrictions, closure);
    let iter = enumerate_valuations(&sys.base, closure, free_bits_cap)?;
    Ok(iter.filter(move |v| checks.iter().all(|c| c.holds(v))))
}

/// When GL is active, checks run over the closure extended with `#A -> A`
/// for every `#A` present, so the GL predicate has instances to bite on.
pub fn gl_extended(sys: &RnSystem, closure: Arc<Closure>) -> Arc<Closure> {
    if !sys.has(&Restriction::Gl) {
        return closure;
    }
    let extra: Vec<Formula> = closure
        .items()
        .iter()
        .filter_map(|f| match f {
            Formula::Mod(ModalIndex::One, a) => {
                Some(Formula::imp(f.clone(), a.as_ref().clone()))
            }
            _ => None,
        })
        .collect();
    closure.extended(&extra)
}

/// The closure actually used for validity checks over a restricted system.
pub fn validity_closure(sys: &RnSystem, goal: &Formula) -> Arc<Closure> {
    gl_extended(sys, Closure::of(goal))
}

pub fn check_validity_rn(sys: &RnSystem, goal: &Formula, free_bits_cap: f64) -> Result<Verdict> {
    let closure = validity_closure(sys, goal);
    let goal_ix = closure.position(goal).unwrap();
    for v in enumerate_restricted(sys, &closure, free_bits_cap)? {
        if !v.snapshot_at(goal_ix).is_designated() {
            return Ok(Verdict::Countermodel(v));
        }
    }
    Ok(Verdict::Valid)
}

/// Composes `v` with a substitution: the valuation `A |-> v(subst(A))` over
/// the closure `c`, then reports whether the system's restrictions hold of
/// the composition. `v` must cover every substituted member of `c`.
pub fn check_structurality(
    sys: &RnSystem,
    v: &Valuation,
    subst: &Substitution,
    c: &Arc<Closure>,
) -> Result<bool> {
    let values: Vec<_> = c
        .items()
        .iter()
        .map(|f| {
            let image = subst.apply(f);
            v.snapshot(&image).ok_or_else(|| {
                Error::DomainMismatch(format!("v is not defined on the instance {image}"))
            })
        })
        .collect::<Result<_>>()?;
    let composed = Valuation::new(c.clone(), values);
    debug_assert!(composed.is_legal(&sys.base));
    let checks = compile(&sys.restrictions, c);
    Ok(checks.iter().all(|ch| ch.holds(&composed)))
}

/// A decision engine: a plain non-deterministic matrix or a restricted one.
#[derive(Clone, Debug)]
pub enum Engine {
    Nmatrix(MatrixSpec),
    Rn(RnSystem),
}

impl Engine {
    pub fn base(&self) -> &MatrixSpec {
        match self {
            Engine::Nmatrix(m) => m,
            Engine::Rn(s) => s.base(),
        }
    }

    pub fn restrictions(&self) -> &[Restriction] {
        match self {
            Engine::Nmatrix(_) => &[],
            Engine::Rn(s) => s.restrictions(),
        }
    }

    pub fn valuations<'a>(
        &'a self,
        closure: &Arc<Closure>,
        free_bits_cap: f64,
    ) -> Result<Box<dyn Iterator<Item = Valuation> + 'a>> {
        match self {
            Engine::Nmatrix(m) => Ok(Box::new(enumerate_valuations(m, closure, free_bits_cap)?)),
            Engine::Rn(s) => Ok(Box::new(enumerate_restricted(s, closure, free_bits_cap)?)),
        }
    }

    pub fn check_validity(&self, goal: &Formula, free_bits_cap: f64) -> Result<Verdict> {
        match self {
            Engine::Nmatrix(m) => crate::valuation::check_validity(m, goal, free_bits_cap),
            Engine::Rn(s) => check_validity_rn(s, goal, free_bits_cap),
        }
    }

    /// Local consequence: every admitted valuation designating all premises
    /// also designates the goal.
    pub fn check_consequence(
        &self,
        premises: &[Formula],
        goal: &Formula,
        free_bits_cap: f64,
    ) -> Result<Verdict> {
        let mut all: Vec<Formula> = premises.to_vec();
        all.push(goal.clone());
        let mut closure = Closure::of_all(&all);
        if let Engine::Rn(s) = self {
            closure = gl_extended(s, closure);
        }
        let goal_ix = closure.position(goal).unwrap();
        let premise_ix: Vec<usize> = premises
            .iter()
            .map(|p| closure.position(p).unwrap())
            .collect();
        for v in self.valuations(&closure, free_bits_cap)? {
            if premise_ix.iter().all(|&i| v.snapshot_at(i).is_designated())
                && !v.snapshot_at(goal_ix).is_designated()
            {
                return Ok(Verdict::Countermodel(v));
            }
        }
        Ok(Verdict::Valid)
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::Nmatrix(m) => write!(f, "{}", m.name()),
            Engine::Rn(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Signature;
    use crate::matrix::Snapshot;
    use crate::parser::parse;

    fn uf(s: &str) -> Formula {
        parse(s, Signature::Unimodal).unwrap()
    }

    fn bf(s: &str) -> Formula {
        parse(s, Signature::Bimodal).unwrap()
    }

    fn m2_system(restrictions: Vec<Restriction>) -> RnSystem {
        RnSystem::new(matrix_for(SystemName::M2), restrictions).unwrap()
    }

    #[test]
    fn rn_kt_over_p_has_3_valuations() {
        let sys = RnSystem::rn_kt();
        let c = Closure::of(&Formula::var("p"));
        assert_eq!(enumerate_restricted(&sys, &c, 24.0).unwrap().count(), 3);
    }

    #[test]
    fn rn_counts_match_refined_matrices() {
        let pairs = [
            (RnSystem::rn_k(), SystemName::Mk),
            (RnSystem::rn_kt(), SystemName::Mkt),
            (RnSystem::rn_kt4(), SystemName::Mkt4),
        ];
        let goals = ["#(p -> q) -> (#p -> #q)", "#p -> ##p", "~#~p -> #~#p"];
        for (sys, refined) in &pairs {
            let m = matrix_for(*refined);
            for g in goals {
                let c = Closure::of(&uf(g));
                let rn = enumerate_restricted(sys, &c, 24.0).unwrap().count();
                let nm = enumerate_valuations(&m, &c, 24.0).unwrap().count();
                assert_eq!(rn, nm, "{sys} vs {refined} on {g}");
            }
        }
    }

    #[test]
    fn adding_a_restriction_never_enlarges_the_valuation_stream() {
        let base = matrix_for(SystemName::M);
        let chains: [Vec<Restriction>; 4] = [
            vec![],
            vec![Restriction::K],
            vec![Restriction::K, Restriction::T],
            vec![Restriction::K, Restriction::T, Restriction::Four],
        ];
        let goals = ["#(p -> q) -> (#p -> #q)", "#p -> p", "~#p -> #~p", "#p -> ##p"];
        for g in goals {
            let c = Closure::of(&uf(g));
            let mut previous: Option<Vec<Vec<Snapshot>>> = None;
            for restrictions in &chains {
                let sys = RnSystem::new(base.clone(), restrictions.clone()).unwrap();
                let admitted: Vec<Vec<Snapshot>> = enumerate_restricted(&sys, &c, 24.0)
                    .unwrap()
                    .map(|v| v.entries().map(|(_, z)| z).collect())
                    .collect();
                if let Some(prev) = &previous {
                    assert!(
                        admitted.iter().all(|v| prev.contains(v)),
                        "restrictions {restrictions:?} admitted a valuation the weaker system rejected on {g}"
                    );
                }
                previous = Some(admitted);
            }
        }
    }

    #[test]
    fn k_axiom_needs_the_k_restriction() {
        let k = uf("#(p -> q) -> (#p -> #q)");
        let plain = RnSystem::new(matrix_for(SystemName::M), vec![]).unwrap();
        assert!(!check_validity_rn(&plain, &k, 24.0).unwrap().is_valid());
        assert!(check_validity_rn(&RnSystem::rn_k(), &k, 24.0).unwrap().is_valid());
    }

    #[test]
    fn t_and_four_axioms() {
        let t = uf("#p -> p");
        let four = uf("#p -> ##p");
        assert!(!check_validity_rn(&RnSystem::rn_k(), &t, 24.0).unwrap().is_valid());
        assert!(check_validity_rn(&RnSystem::rn_kt(), &t, 24.0).unwrap().is_valid());
        assert!(!check_validity_rn(&RnSystem::rn_kt(), &four, 24.0).unwrap().is_valid());
        assert!(check_validity_rn(&RnSystem::rn_kt4(), &four, 24.0).unwrap().is_valid());
    }

    #[test]
    fn gl_axiom_and_closure_extension() {
        let gl = uf("#(#p -> p) -> #p");
        assert!(check_validity_rn(&RnSystem::rn_gl(), &gl, 24.0).unwrap().is_valid());
        assert!(!check_validity_rn(&RnSystem::rn_k(), &gl, 24.0).unwrap().is_valid());
        let extended = validity_closure(&RnSystem::rn_gl(), &gl);
        assert!(extended.contains(&uf("#(#p -> p) -> (#p -> p)")));
        assert_eq!(extended.len(), Closure::of(&gl).len() + 1);
    }

    #[test]
    fn bimodal_dualities() {
        let sys = m2_system(vec![Restriction::Dual21, Restriction::Dual12]);
        for s in ["#2p <-> ~#1~p", "#1p <-> ~#2~p"] {
            assert!(check_validity_rn(&sys, &bf(s), 24.0).unwrap().is_valid(), "{s}");
            let plain = m2_system(vec![]);
            assert!(!check_validity_rn(&plain, &bf(s), 24.0).unwrap().is_valid(), "{s}");
        }
    }

    #[test]
    fn bimodal_swap() {
        let sys = m2_system(vec![Restriction::Swap]);
        let goal = bf("#2#1p -> #1#2p");
        assert!(check_validity_rn(&sys, &goal, 24.0).unwrap().is_valid());
        let plain = m2_system(vec![]);
        assert!(!check_validity_rn(&plain, &goal, 24.0).unwrap().is_valid());
    }

    #[test]
    fn bimodal_remaining_rows() {
        let mono = m2_system(vec![Restriction::Mono12]);
        assert!(check_validity_rn(&mono, &bf("#1p -> #2p"), 24.0).unwrap().is_valid());
        let intro = m2_system(vec![Restriction::Intro12]);
        assert!(check_validity_rn(&intro, &bf("p -> #1#2p"), 24.0).unwrap().is_valid());
        let nest = m2_system(vec![Restriction::Nest212]);
        assert!(check_validity_rn(&nest, &bf("#2p -> #1#2p"), 24.0).unwrap().is_valid());
    }

    #[test]
    fn engine_consequence_matches_the_plain_checker() {
        let premises = [uf("p"), uf("p -> q")];
        let goal = uf("q");
        for engine in [
            Engine::Nmatrix(matrix_for(SystemName::Mk)),
            Engine::Rn(RnSystem::rn_k()),
        ] {
            assert!(engine.check_consequence(&premises, &goal, 24.0).unwrap().is_valid());
            let refuted = engine
                .check_consequence(&[uf("p")], &uf("#p"), 24.0)
                .unwrap();
            assert!(!refuted.is_valid());
        }
    }

    #[test]
    fn signature_validation() {
        assert!(RnSystem::new(matrix_for(SystemName::M), vec![Restriction::Swap]).is_err());
        assert!(RnSystem::new(matrix_for(SystemName::M2), vec![Restriction::K]).is_err());
    }

    #[test]
    fn restriction_names_parse() {
        for (s, r) in [
            ("K", Restriction::K),
            ("t", Restriction::T),
            ("4", Restriction::Four),
            ("GL", Restriction::Gl),
            ("dual21", Restriction::Dual21),
            ("swap", Restriction::Swap),
        ] {
            assert_eq!(s.parse::<Restriction>().unwrap(), r);
        }
        assert!("K5".parse::<Restriction>().is_err());
    }

    #[test]
    fn structurality_positive_sample() {
        let sys = RnSystem::rn_kt4();
        let f = uf("#(p -> q) -> #q");
        let c = Closure::of(&f);
        let subst = Substitution::new()
            .bind("p", uf("~r"))
            .bind("q", uf("#(r -> r)"));
        let instance_closure = Closure::of(&subst.apply(&f));
        for v in enumerate_restricted(&sys, &instance_closure, 24.0).unwrap().take(200) {
            assert!(check_structurality(&sys, &v, &subst, &c).unwrap());
        }
    }

    #[test]
    fn structurality_negative_control() {
        let base = matrix_for(SystemName::M);
        let sys = RnSystem::new(base, vec![Restriction::ForcedModalVar("p".into())]).unwrap();
        let c = Closure::of(&Formula::var("p"));
        let subst = Substitution::new().bind("p", uf("~p"));
        let instance_closure = Closure::of(&uf("~p"));
        let picked = enumerate_restricted(&sys, &instance_closure, 24.0)
            .unwrap()
            .find(|v| {
                v.snapshot(&Formula::var("p")) == Some(Snapshot::pair(true, true))
                    && v.snapshot(&uf("~p")) == Some(Snapshot::pair(false, false))
            })
            .expect("a legal valuation with the pinned shape exists");
        assert!(!check_structurality(&sys, &picked, &subst, &c).unwrap());
    }

    #[test]
    fn structurality_domain_error() {
        let sys = RnSystem::rn_k();
        let c = Closure::of(&uf("#p"));
        let subst = Substitution::new().bind("p", uf("q"));
        let v = enumerate_restricted(&sys, &Closure::of(&uf("p")), 24.0)
            .unwrap()
            .next()
            .unwrap();
        assert!(check_structurality(&sys, &v, &subst, &c).is_err());
    }
}
