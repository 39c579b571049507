//! Formula AST, printing, substitution, subformula closures and corpus
//! enumeration for the modal language with `~`, `->` and the modal sign `#`
//! (indexed `#1`/`#2` in the bimodal signature).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which modal operator a `Formula::Mod` node carries. Unimodal formulas use
/// `One` throughout; `Two` only appears in the bimodal signature.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModalIndex {
    One,
    Two,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Signature {
    Unimodal,
    Bimodal,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Unimodal => write!(f, "unimodal"),
            Signature::Bimodal => write!(f, "bimodal"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Neg(Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Mod(ModalIndex, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(f: Formula) -> Formula {
        Formula::Neg(Box::new(f))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn mod1(f: Formula) -> Formula {
        Formula::Mod(ModalIndex::One, Box::new(f))
    }

    pub fn mod2(f: Formula) -> Formula {
        Formula::Mod(ModalIndex::Two, Box::new(f))
    }

    /// Folds a premise list onto a goal: `[b1, b2] -> g` becomes
    /// `b1 -> (b2 -> g)`.
    pub fn unfold(premises: &[Formula], goal: &Formula) -> Formula {
        let mut out = goal.clone();
        for b in premises.iter().rev() {
            out = Formula::imp(b.clone(), out);
        }
        out
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Neg(a) | Formula::Mod(_, a) => 1 + a.node_count(),
            Formula::Imp(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Number of connective occurrences (`~`, `->`, `#`, `#2`).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Neg(a) | Formula::Mod(_, a) => 1 + a.connective_count(),
            Formula::Imp(a, b) => 1 + a.connective_count() + b.connective_count(),
        }
    }

    pub fn uses_mod2(&self) -> bool {
        match self {
            Formula::Var(_) => false,
            Formula::Neg(a) => a.uses_mod2(),
            Formula::Mod(ModalIndex::Two, _) => true,
            Formula::Mod(ModalIndex::One, a) => a.uses_mod2(),
            Formula::Imp(a, b) => a.uses_mod2() || b.uses_mod2(),
        }
    }

    pub fn signature(&self) -> Signature {
        if self.uses_mod2() {
            Signature::Bimodal
        } else {
            Signature::Unimodal
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Neg(a) | Formula::Mod(_, a) => a.collect_vars(out),
            Formula::Imp(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Appends the minimal-parenthesis rendering. This sidesteps the
    /// formatter machinery because printing sits on several hot paths
    /// (canonical closure order, proof-search dedup keys).
    pub fn push_printed(&self, out: &mut String) {
        // Unary operand: parenthesize only binary children.
        fn unary_child(out: &mut String, c: &Formula) {
            if matches!(c, Formula::Imp(_, _)) {
                out.push('(');
                c.push_printed(out);
                out.push(')');
            } else {
                c.push_printed(out);
            }
        }
        match self {
            Formula::Var(v) => out.push_str(v),
            Formula::Neg(a) => {
                out.push('~');
                unary_child(out, a);
            }
            Formula::Mod(ModalIndex::One, a) => {
                out.push('#');
                unary_child(out, a);
            }
            Formula::Mod(ModalIndex::Two, a) => {
                out.push_str("#2");
                unary_child(out, a);
            }
            Formula::Imp(a, b) => {
                // `->` is right-associative: parenthesize a left implication.
                if matches!(**a, Formula::Imp(_, _)) {
                    out.push('(');
                    a.push_printed(out);
                    out.push(')');
                } else {
                    a.push_printed(out);
                }
                out.push_str(" -> ");
                b.push_printed(out);
            }
        }
    }

    /// The canonical printed form; `parse` round-trips it.
    pub fn printed(&self) -> String {
        let mut out = String::with_capacity(self.node_count() * 4);
        self.push_printed(&mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.printed())
    }
}

/// A uniform substitution of formulas for variable names. Application is
/// homomorphic over the connectives.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Formula>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn bind(mut self, var: impl Into<String>, f: Formula) -> Substitution {
        self.map.insert(var.into(), f);
        self
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.map.get(var)
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        match f {
            Formula::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| f.clone()),
            Formula::Neg(a) => Formula::neg(self.apply(a)),
            Formula::Mod(i, a) => Formula::Mod(*i, Box::new(self.apply(a))),
            Formula::Imp(a, b) => Formula::imp(self.apply(a), self.apply(b)),
        }
    }
}

impl FromIterator<(String, Formula)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (String, Formula)>>(iter: T) -> Substitution {
        Substitution {
            map: iter.into_iter().collect(),
        }
    }
}

/// Structural view of one closure entry, with children referenced by closure
/// index. Children always precede parents in the closure order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Var(String),
    Neg(usize),
    Imp(usize, usize),
    Mod(ModalIndex, usize),
}

/// The set of all distinct subformulas of one or more root formulas, in a
/// fixed deterministic order: ascending node count, ties broken by printed
/// form. A single root is therefore always the last entry.
#[derive(Clone, Debug)]
pub struct Closure {
    items: Vec<Formula>,
    index: HashMap<Formula, usize>,
    nodes: Vec<Node>,
    signature: Signature,
}

impl Closure {
    pub fn of(root: &Formula) -> Arc<Closure> {
        Closure::of_all(std::slice::from_ref(root))
    }

    pub fn of_all(roots: &[Formula]) -> Arc<Closure> {
        let mut seen = BTreeSet::new();
        for r in roots {
            collect_subformulas(r, &mut seen);
        }
        let mut items: Vec<Formula> = seen.into_iter().collect();
        items.sort_by_cached_key(|f| (f.node_count(), f.to_string()));
        let index: HashMap<Formula, usize> = items
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let nodes = items
            .iter()
            .map(|f| match f {
                Formula::Var(v) => Node::Var(v.clone()),
                Formula::Neg(a) => Node::Neg(index[a.as_ref()]),
                Formula::Imp(a, b) => Node::Imp(index[a.as_ref()], index[b.as_ref()]),
                Formula::Mod(i, a) => Node::Mod(*i, index[a.as_ref()]),
            })
            .collect();
        let signature = if items.iter().any(|f| matches!(f, Formula::Mod(ModalIndex::Two, _))) {
            Signature::Bimodal
        } else {
            Signature::Unimodal
        };
        Arc::new(Closure {
            items,
            index,
            nodes,
            signature,
        })
    }

    /// Closure of this closure's members plus `extra` roots.
    pub fn extended(&self, extra: &[Formula]) -> Arc<Closure> {
        let mut roots = self.items.clone();
        roots.extend_from_slice(extra);
        Closure::of_all(&roots)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Formula] {
        &self.items
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn formula(&self, i: usize) -> &Formula {
        &self.items[i]
    }

    pub fn position(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.items.iter()
    }
}

fn collect_subformulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    if out.contains(f) {
        return;
    }
    match f {
        Formula::Var(_) => {}
        Formula::Neg(a) | Formula::Mod(_, a) => collect_subformulas(a, out),
        Formula::Imp(a, b) => {
            collect_subformulas(a, out);
            collect_subformulas(b, out);
        }
    }
    out.insert(f.clone());
}

/// Counts the formulas over `vars` with exactly `c` connectives, per layer,
/// up to `max`. Used to enforce the corpus cap before materializing anything.
fn corpus_layer_counts(nvars: u128, max: usize, signature: Signature) -> Vec<u128> {
    let unary: u128 = match signature {
        Signature::Unimodal => 2, // ~ and #
        Signature::Bimodal => 3,  // ~, #1, #2
    };
    let mut t = vec![0u128; max + 1];
    t[0] = nvars;
    for c in 1..=max {
        let mut n = unary.saturating_mul(t[c - 1]);
        for i in 0..c {
            n = n.saturating_add(t[i].saturating_mul(t[c - 1 - i]));
        }
        t[c] = n;
    }
    t
}

/// All formulas over `vars` with at most `max_connectives` connective
/// occurrences, each exactly once, in a deterministic order: ascending
/// connective count; within a layer negations first, then modal formulas,
/// then implications (left layer ascending).
pub fn enumerate_corpus(
    vars: &[String],
    max_connectives: usize,
    signature: Signature,
    cap: u64,
) -> Result<Vec<Formula>> {
    let counts = corpus_layer_counts(vars.len() as u128, max_connectives, signature);
    let total: u128 = counts.iter().sum();
    if total > cap as u128 {
        return Err(Error::BudgetExceeded {
            resource: "corpus size".into(),
            needed: total as f64,
            cap: cap as f64,
        });
    }
    let mut layers: Vec<Vec<Formula>> = Vec::with_capacity(max_connectives + 1);
    layers.push(vars.iter().map(Formula::var).collect());
    for c in 1..=max_connectives {
        let mut layer = Vec::new();
        for f in &layers[c - 1] {
            layer.push(Formula::neg(f.clone()));
        }
        for f in &layers[c - 1] {
            layer.push(Formula::mod1(f.clone()));
        }
        if signature == Signature::Bimodal {
            for f in &layers[c - 1] {
                layer.push(Formula::mod2(f.clone()));
            }
        }
        for i in 0..c {
            for a in &layers[i] {
                for b in &layers[c - 1 - i] {
                    layer.push(Formula::imp(a.clone(), b.clone()));
                }
            }
        }
        layers.push(layer);
    }
    Ok(layers.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p() -> Formula {
        Formula::var("p")
    }

    fn q() -> Formula {
        Formula::var("q")
    }

    #[test]
    fn prints_with_minimal_parens() {
        let f = Formula::imp(Formula::imp(p(), q()), p());
        assert_eq!(f.to_string(), "(p -> q) -> p");
        let g = Formula::imp(p(), Formula::imp(q(), p()));
        assert_eq!(g.to_string(), "p -> q -> p");
        let h = Formula::neg(Formula::imp(p(), Formula::neg(q())));
        assert_eq!(h.to_string(), "~(p -> ~q)");
        let m = Formula::mod1(Formula::neg(p()));
        assert_eq!(m.to_string(), "#~p");
        let m2 = Formula::mod2(Formula::imp(p(), q()));
        assert_eq!(m2.to_string(), "#2(p -> q)");
    }

    #[test]
    fn substitution_is_homomorphic() {
        let f = Formula::neg(Formula::mod1(p()));
        let s = Substitution::new().bind("p", Formula::mod1(p()));
        assert_eq!(s.apply(&f), Formula::neg(Formula::mod1(Formula::mod1(p()))));
    }

    #[test]
    fn closure_of_k_axiom_has_size_8_children_first() {
        let k = parse("#(p -> q) -> (#p -> #q)", Signature::Unimodal).unwrap();
        let c = Closure::of(&k);
        assert_eq!(c.len(), 8);
        let printed: Vec<String> = c.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            printed,
            vec![
                "p",
                "q",
                "#p",
                "#q",
                "p -> q",
                "#(p -> q)",
                "#p -> #q",
                "#(p -> q) -> #p -> #q",
            ]
        );
        // children precede parents
        for (i, node) in c.nodes().iter().enumerate() {
            match node {
                Node::Var(_) => {}
                Node::Neg(a) | Node::Mod(_, a) => assert!(*a < i),
                Node::Imp(a, b) => {
                    assert!(*a < i);
                    assert!(*b < i);
                }
            }
        }
    }

    #[test]
    fn single_root_is_last() {
        let f = parse("#p -> ~(q -> p)", Signature::Unimodal).unwrap();
        let c = Closure::of(&f);
        assert_eq!(c.formula(c.len() - 1), &f);
    }

    #[test]
    fn union_closure_deduplicates() {
        let a = parse("#p -> p", Signature::Unimodal).unwrap();
        let b = parse("#p", Signature::Unimodal).unwrap();
        let c = Closure::of_all(&[a, b]);
        assert_eq!(c.len(), 3); // p, #p, #p -> p
    }

    #[test]
    fn corpus_single_var_one_connective() {
        let corpus =
            enumerate_corpus(&["p".into()], 1, Signature::Unimodal, 1000).unwrap();
        let printed: Vec<String> = corpus.iter().map(|f| f.to_string()).collect();
        assert_eq!(printed, vec!["p", "~p", "#p", "p -> p"]);
    }

    #[test]
    fn corpus_counts_and_dedup() {
        let corpus = enumerate_corpus(
            &["p".into(), "q".into()],
            3,
            Signature::Unimodal,
            100_000,
        )
        .unwrap();
        assert_eq!(corpus.len(), 2 + 8 + 48 + 352);
        let set: BTreeSet<&Formula> = corpus.iter().collect();
        assert_eq!(set.len(), corpus.len());
    }

    #[test]
    fn corpus_cap_is_enforced() {
        let err = enumerate_corpus(&["p".into(), "q".into()], 6, Signature::Unimodal, 100)
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn unfold_right_nests() {
        let u = Formula::unfold(&[p(), q()], &Formula::mod1(p()));
        assert_eq!(u.to_string(), "p -> q -> #p");
    }
}
