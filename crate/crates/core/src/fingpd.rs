//! Finite groupoids, functors, bibundles, and the linking groupoid: the
//! bibundle calculus made fully decidable by exhaustive checking.
//!
//! Composition is written from right to left throughout: `comp[(g2, g1)]`
//! is `g2` after `g1` and requires `s(g2) = t(g1)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::report::Report;

pub const DEFAULT_MAX_ARROWS: usize = 10_000;

/// Size guard limit; `LIE2_MAX_SIZE` overrides the default.
pub fn max_arrows() -> usize {
    std::env::var("LIE2_MAX_SIZE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_ARROWS)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("groupoid has {arrows} arrows, over the size guard {limit} (set LIE2_MAX_SIZE to raise it)")]
    TooLarge { arrows: usize, limit: usize },
    #[error("not a groupoid: check `{check}` failed")]
    NotAGroupoid { check: String },
    #[error("not a functor: check `{check}` failed")]
    NotAFunctor { check: String },
    #[error("sigma is not a section of the left anchor at object `{object}`")]
    NotASection { object: String },
    #[error("bibundle is not biprincipal: check `{check}` failed")]
    NotBiprincipal { check: String },
    #[error("middle groupoids do not match")]
    MiddleMismatch,
    #[error("map is not a bibundle isomorphism: check `{check}` failed")]
    NotEquivariant { check: String },
    #[error("object subset is empty")]
    EmptyObjects,
    #[error("broken bibundle: {0}")]
    BrokenBundle(String),
}

// ---------------------------------------------------------------------------
// Groupoids
// ---------------------------------------------------------------------------

/// Finite groupoid with labelled objects and arrows; all structure maps are
/// stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<String>,
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    /// Identity arrow per object.
    pub unit: Vec<usize>,
    pub inv: Vec<usize>,
    /// `comp[(g2, g1)] = g2 . g1`, defined exactly when `s(g2) = t(g1)`.
    pub comp: BTreeMap<(usize, usize), usize>,
}

impl FinGroupoid {
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<String>,
        s: Vec<usize>,
        t: Vec<usize>,
        unit: Vec<usize>,
        inv: Vec<usize>,
        comp: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self, Error> {
        let limit = max_arrows();
        if arrows.len() > limit {
            return Err(Error::TooLarge {
                arrows: arrows.len(),
                limit,
            });
        }
        Ok(FinGroupoid {
            objects,
            arrows,
            s,
            t,
            unit,
            inv,
            comp,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    /// `g2` after `g1`.
    pub fn compose(&self, g2: usize, g1: usize) -> Option<usize> {
        self.comp.get(&(g2, g1)).copied()
    }

    pub fn hom(&self, from: usize, to: usize) -> Vec<usize> {
        (0..self.n_arrows())
            .filter(|&g| self.s[g] == from && self.t[g] == to)
            .collect()
    }
}

/// Exhaustive groupoid axiom check; failures cite labels.
pub fn verify_groupoid(g: &FinGroupoid) -> Report {
    let mut report = Report::new("fin_groupoid");
    let n1 = g.n_arrows();
    let n0 = g.n_objects();
    let shapes_ok = g.s.len() == n1
        && g.t.len() == n1
        && g.inv.len() == n1
        && g.unit.len() == n0
        && g.s.iter().chain(&g.t).all(|&x| x < n0)
        && g.unit.iter().all(|&a| a < n1)
        && g.inv.iter().all(|&a| a < n1)
        && g.comp
            .iter()
            .all(|(&(a, b), &c)| a < n1 && b < n1 && c < n1);
    report.check(
        "shapes",
        shapes_ok,
        Some("structure maps have wrong lengths or out-of-range indices".into()),
    );
    if !shapes_ok {
        return report;
    }
    report.derive("n_objects", n0);
    report.derive("n_arrows", n1);

    let mut bad = None;
    for x in 0..n0 {
        let u = g.unit[x];
        if g.s[u] != x || g.t[u] != x {
            bad = Some(format!("unit of `{}` has wrong boundary", g.objects[x]));
            break;
        }
    }
    report.check("unit_boundaries", bad.is_none(), bad);

    let mut bad = None;
    'dom: for g2 in 0..n1 {
        for g1 in 0..n1 {
            let composable = g.s[g2] == g.t[g1];
            if composable != g.comp.contains_key(&(g2, g1)) {
                bad = Some(format!(
                    "composition is {} on ({}, {})",
                    if composable { "missing" } else { "defined" },
                    g.arrows[g2],
                    g.arrows[g1]
                ));
                break 'dom;
            }
        }
    }
    report.check("comp_domain", bad.is_none(), bad);
    if !report.pass() {
        return report;
    }

    let mut bad = None;
    for (&(g2, g1), &c) in &g.comp {
        if g.s[c] != g.s[g1] || g.t[c] != g.t[g2] {
            bad = Some(format!(
                "boundary of {} . {} is wrong",
                g.arrows[g2], g.arrows[g1]
            ));
            break;
        }
    }
    report.check("comp_boundaries", bad.is_none(), bad);

    let mut bad = None;
    for a in 0..n1 {
        let lu = g.compose(g.unit[g.t[a]], a);
        let ru = g.compose(a, g.unit[g.s[a]]);
        if lu != Some(a) || ru != Some(a) {
            bad = Some(format!("unit law fails on {}", g.arrows[a]));
            break;
        }
    }
    report.check("unit_laws", bad.is_none(), bad);

    let mut bad = None;
    'assoc: for g3 in 0..n1 {
        for g2 in 0..n1 {
            if g.s[g3] != g.t[g2] {
                continue;
            }
            for g1 in 0..n1 {
                if g.s[g2] != g.t[g1] {
                    continue;
                }
                let lhs = g.compose(g3, g2).and_then(|x| g.compose(x, g1));
                let rhs = g.compose(g2, g1).and_then(|x| g.compose(g3, x));
                if lhs.is_none() || lhs != rhs {
                    bad = Some(format!(
                        "associativity fails on ({}, {}, {})",
                        g.arrows[g3], g.arrows[g2], g.arrows[g1]
                    ));
                    break 'assoc;
                }
            }
        }
    }
    report.check("associativity", bad.is_none(), bad);

    let mut bad = None;
    for a in 0..n1 {
        let i = g.inv[a];
        let ok = g.s[i] == g.t[a]
            && g.t[i] == g.s[a]
            && g.compose(i, a) == Some(g.unit[g.s[a]])
            && g.compose(a, i) == Some(g.unit[g.t[a]]);
        if !ok {
            bad = Some(format!("inverse law fails on {}", g.arrows[a]));
            break;
        }
    }
    report.check("inverse_laws", bad.is_none(), bad);
    report
}

// ---------------------------------------------------------------------------
// Functors and natural transformations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    pub source: FinGroupoid,
    pub target: FinGroupoid,
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl FinFunctor {
    pub fn identity(g: &FinGroupoid) -> Self {
        FinFunctor {
            source: g.clone(),
            target: g.clone(),
            on_objects: (0..g.n_objects()).collect(),
            on_arrows: (0..g.n_arrows()).collect(),
        }
    }

    /// `g` after `f`.
    pub fn compose(g: &FinFunctor, f: &FinFunctor) -> Self {
        assert_eq!(f.target, g.source);
        FinFunctor {
            source: f.source.clone(),
            target: g.target.clone(),
            on_objects: f.on_objects.iter().map(|&x| g.on_objects[x]).collect(),
            on_arrows: f.on_arrows.iter().map(|&a| g.on_arrows[a]).collect(),
        }
    }
}

pub fn verify_functor(f: &FinFunctor) -> Report {
    let mut report = Report::new("fin_functor");
    let shapes_ok = f.on_objects.len() == f.source.n_objects()
        && f.on_arrows.len() == f.source.n_arrows()
        && f.on_objects.iter().all(|&x| x < f.target.n_objects())
        && f.on_arrows.iter().all(|&a| a < f.target.n_arrows());
    report.check("shapes", shapes_ok, Some("index maps out of range".into()));
    if !shapes_ok {
        return report;
    }

    let mut bad = None;
    for a in 0..f.source.n_arrows() {
        let fa = f.on_arrows[a];
        if f.target.s[fa] != f.on_objects[f.source.s[a]]
            || f.target.t[fa] != f.on_objects[f.source.t[a]]
        {
            bad = Some(format!(
                "boundary square fails on {}",
                f.source.arrows[a]
            ));
            break;
        }
    }
    report.check("boundaries", bad.is_none(), bad);

    let mut bad = None;
    for x in 0..f.source.n_objects() {
        if f.on_arrows[f.source.unit[x]] != f.target.unit[f.on_objects[x]] {
            bad = Some(format!("unit square fails on {}", f.source.objects[x]));
            break;
        }
    }
    report.check("units", bad.is_none(), bad);

    let mut bad = None;
    for (&(g2, g1), &c) in &f.source.comp {
        if f.target.compose(f.on_arrows[g2], f.on_arrows[g1]) != Some(f.on_arrows[c]) {
            bad = Some(format!(
                "composition square fails on ({}, {})",
                f.source.arrows[g2], f.source.arrows[g1]
            ));
            break;
        }
    }
    report.check("compositions", bad.is_none(), bad);
    report
}

/// Natural transformation `alpha: f => k`, one target arrow per source
/// object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinNatTrans {
    pub component: Vec<usize>,
}

pub fn verify_nat(f: &FinFunctor, k: &FinFunctor, alpha: &FinNatTrans) -> Report {
    let mut report = Report::new("fin_nat_trans");
    let parallel = f.source == k.source && f.target == k.target;
    report.check(
        "parallel_functors",
        parallel,
        Some("f and k do not share source/target".into()),
    );
    let shapes_ok = parallel
        && alpha.component.len() == f.source.n_objects()
        && alpha.component.iter().all(|&a| a < f.target.n_arrows());
    report.check("shapes", shapes_ok, Some("component out of range".into()));
    if !shapes_ok {
        return report;
    }

    let mut bad = None;
    for x in 0..f.source.n_objects() {
        let a = alpha.component[x];
        if f.target.s[a] != f.on_objects[x] || f.target.t[a] != k.on_objects[x] {
            bad = Some(format!(
                "component at {} is not f(x) -> k(x)",
                f.source.objects[x]
            ));
            break;
        }
    }
    report.check("boundaries", bad.is_none(), bad);
    if !report.pass() {
        return report;
    }

    let mut bad = None;
    for g in 0..f.source.n_arrows() {
        let (x, y) = (f.source.s[g], f.source.t[g]);
        let lhs = f.target.compose(k.on_arrows[g], alpha.component[x]);
        let rhs = f.target.compose(alpha.component[y], f.on_arrows[g]);
        if lhs.is_none() || lhs != rhs {
            bad = Some(format!(
                "naturality square fails on {}",
                f.source.arrows[g]
            ));
            break;
        }
    }
    report.check("naturality", bad.is_none(), bad);
    report
}

// ---------------------------------------------------------------------------
// Bibundles
// ---------------------------------------------------------------------------

/// Bibundle between finite groupoids; the right action is required to be
/// principal over the left anchor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinBibundle {
    pub source: FinGroupoid,
    pub target: FinGroupoid,
    pub total: Vec<String>,
    pub a_l: Vec<usize>,
    pub a_r: Vec<usize>,
    /// `(g, p) -> g . p`, defined exactly when `s(g) = aL(p)`.
    pub act_l: BTreeMap<(usize, usize), usize>,
    /// `(p, h) -> p . h`, defined exactly when `aR(p) = t(h)`.
    pub act_r: BTreeMap<(usize, usize), usize>,
}

impl FinBibundle {
    pub fn size(&self) -> usize {
        self.total.len()
    }
}

/// Exhaustive bibundle axiom check, including right principality over the
/// left anchor.
pub fn verify_bibundle(p: &FinBibundle) -> Report {
    let mut report = Report::new("fin_bibundle");
    let n = p.size();
    let g = &p.source;
    let h = &p.target;
    let shapes_ok = p.a_l.len() == n
        && p.a_r.len() == n
        && p.a_l.iter().all(|&x| x < g.n_objects())
        && p.a_r.iter().all(|&x| x < h.n_objects());
    report.check("shapes", shapes_ok, Some("anchors out of range".into()));
    if !shapes_ok {
        return report;
    }
    report.derive("total_size", n);

    let mut bad = None;
    'dl: for a in 0..g.n_arrows() {
        for i in 0..n {
            let ok = g.s[a] == p.a_l[i];
            if ok != p.act_l.contains_key(&(a, i)) {
                bad = Some(format!(
                    "left action is {} on ({}, {})",
                    if ok { "missing" } else { "defined" },
                    g.arrows[a],
                    p.total[i]
                ));
                break 'dl;
            }
        }
    }
    report.check("left_action_domain", bad.is_none(), bad);

    let mut bad = None;
    'dr: for i in 0..n {
        for a in 0..h.n_arrows() {
            let ok = p.a_r[i] == h.t[a];
            if ok != p.act_r.contains_key(&(i, a)) {
                bad = Some(format!(
                    "right action is {} on ({}, {})",
                    if ok { "missing" } else { "defined" },
                    p.total[i],
                    h.arrows[a]
                ));
                break 'dr;
            }
        }
    }
    report.check("right_action_domain", bad.is_none(), bad);
    if !report.pass() {
        return report;
    }

    let mut bad = None;
    for (&(a, i), &j) in &p.act_l {
        if j >= n || p.a_l[j] != g.t[a] || p.a_r[j] != p.a_r[i] {
            bad = Some(format!(
                "anchors of {} . {} are wrong",
                g.arrows[a], p.total[i]
            ));
            break;
        }
    }
    report.check("left_action_anchors", bad.is_none(), bad);

    let mut bad = None;
    for (&(i, a), &j) in &p.act_r {
        if j >= n || p.a_l[j] != p.a_l[i] || p.a_r[j] != h.s[a] {
            bad = Some(format!(
                "anchors of {} . {} are wrong",
                p.total[i], h.arrows[a]
            ));
            break;
        }
    }
    report.check("right_action_anchors", bad.is_none(), bad);
    if !report.pass() {
        return report;
    }

    let mut bad = None;
    for i in 0..n {
        let lu = p.act_l.get(&(g.unit[p.a_l[i]], i));
        let ru = p.act_r.get(&(i, h.unit[p.a_r[i]]));
        if lu != Some(&i) || ru != Some(&i) {
            bad = Some(format!("unit action fails on {}", p.total[i]));
            break;
        }
    }
    report.check("unitality", bad.is_none(), bad);

    let mut bad = None;
    'la: for (&(a1, i), &j) in &p.act_l {
        for a2 in 0..g.n_arrows() {
            if g.s[a2] != g.t[a1] {
                continue;
            }
            let lhs = p.act_l.get(&(a2, j)).copied();
            let rhs = g.compose(a2, a1).and_then(|c| p.act_l.get(&(c, i)).copied());
            if lhs.is_none() || lhs != rhs {
                bad = Some(format!(
                    "(g2 g1).p != g2.(g1.p) at ({}, {}, {})",
                    g.arrows[a2], g.arrows[a1], p.total[i]
                ));
                break 'la;
            }
        }
    }
    report.check("left_action_associative", bad.is_none(), bad);

    let mut bad = None;
    'ra: for (&(i, a1), &j) in &p.act_r {
        for a2 in 0..h.n_arrows() {
            if h.s[a1] != h.t[a2] {
                continue;
            }
            let lhs = p.act_r.get(&(j, a2)).copied();
            let rhs = h.compose(a1, a2).and_then(|c| p.act_r.get(&(i, c)).copied());
            if lhs.is_none() || lhs != rhs {
                bad = Some(format!(
                    "(p.h1).h2 != p.(h1 h2) at ({}, {}, {})",
                    p.total[i], h.arrows[a1], h.arrows[a2]
                ));
                break 'ra;
            }
        }
    }
    report.check("right_action_associative", bad.is_none(), bad);

    let mut bad = None;
    'cm: for (&(a, i), &j) in &p.act_l {
        for b in 0..h.n_arrows() {
            if p.a_r[i] != h.t[b] {
                continue;
            }
            let lhs = p.act_r.get(&(j, b)).copied();
            let rhs = p.act_r.get(&(i, b)).and_then(|&k| p.act_l.get(&(a, k)).copied());
            if lhs.is_none() || lhs != rhs {
                bad = Some(format!(
                    "(g.p).h != g.(p.h) at ({}, {}, {})",
                    g.arrows[a], p.total[i], h.arrows[b]
                ));
                break 'cm;
            }
        }
    }
    report.check("actions_commute", bad.is_none(), bad);

    // right principality: aL surjective, H free and transitive on aL-fibers
    let al_surjective = (0..g.n_objects()).all(|x| p.a_l.contains(&x));
    report.check(
        "aL_surjective",
        al_surjective,
        Some("some source object has an empty fiber".into()),
    );
    let mut bad = None;
    'pr: for i in 0..n {
        for j in 0..n {
            if p.a_l[i] != p.a_l[j] {
                continue;
            }
            let count = (0..h.n_arrows())
                .filter(|&b| p.act_r.get(&(i, b)) == Some(&j))
                .count();
            if count != 1 {
                bad = Some(format!(
                    "{} arrows carry {} to {} in the aL-fiber",
                    count, p.total[i], p.total[j]
                ));
                break 'pr;
            }
        }
    }
    report.check("right_principal", bad.is_none(), bad);
    report
}

/// Biprincipality (Morita equivalence): on top of `verify_bibundle`, the
/// right anchor is surjective and the left action is free and transitive on
/// its fibers.
pub fn biprincipality_report(p: &FinBibundle) -> Report {
    let mut report = Report::new("biprincipality");
    report.absorb("bibundle", verify_bibundle(p));
    let ar_surjective = (0..p.target.n_objects()).all(|y| p.a_r.contains(&y));
    report.check(
        "aR_surjective",
        ar_surjective,
        Some("some target object has an empty fiber".into()),
    );
    let g = &p.source;
    let mut bad = None;
    'pr: for i in 0..p.size() {
        for j in 0..p.size() {
            if p.a_r[i] != p.a_r[j] {
                continue;
            }
            let count = (0..g.n_arrows())
                .filter(|&a| p.act_l.get(&(a, i)) == Some(&j))
                .count();
            if count != 1 {
                bad = Some(format!(
                    "{} arrows carry {} to {} in the aR-fiber",
                    count, p.total[i], p.total[j]
                ));
                break 'pr;
            }
        }
    }
    report.check("left_principal", bad.is_none(), bad);
    report
}

pub fn is_biprincipal(p: &FinBibundle) -> bool {
    biprincipality_report(p).pass()
}

/// `<f>` together with its list of `(object, arrow)` pairs; the canonical
/// section sends `x` to `(x, 1_{f(x)})`.
#[derive(Debug, Clone)]
pub struct FinFunctorBundle {
    pub bundle: FinBibundle,
    pub pairs: Vec<(usize, usize)>,
}

impl FinFunctorBundle {
    pub fn index_of(&self, x: usize, gamma: usize) -> Option<usize> {
        self.pairs.iter().position(|&p| p == (x, gamma))
    }

    pub fn canonical_section(&self, f: &FinFunctor) -> Vec<usize> {
        (0..f.source.n_objects())
            .map(|x| {
                self.index_of(x, f.target.unit[f.on_objects[x]])
                    .expect("(x, 1_{f(x)}) is in <f>")
            })
            .collect()
    }
}

/// `<f> = {(x, gamma) : f(x) = t(gamma)}` with `g.(x, gamma) = (t g,
/// f(g) gamma)` and `(x, gamma).nu = (x, gamma nu)`.
pub fn bundle_of_functor(f: &FinFunctor) -> Result<FinFunctorBundle, Error> {
    let r = verify_functor(f);
    if let Some(fail) = r.first_failure() {
        return Err(Error::NotAFunctor {
            check: fail.id.clone(),
        });
    }
    let g = &f.source;
    let h = &f.target;
    let mut pairs = Vec::new();
    for x in 0..g.n_objects() {
        for gamma in 0..h.n_arrows() {
            if f.on_objects[x] == h.t[gamma] {
                pairs.push((x, gamma));
            }
        }
    }
    let total: Vec<String> = pairs
        .iter()
        .map(|&(x, gamma)| format!("({}|{})", g.objects[x], h.arrows[gamma]))
        .collect();
    let a_l: Vec<usize> = pairs.iter().map(|&(x, _)| x).collect();
    let a_r: Vec<usize> = pairs.iter().map(|&(_, gamma)| h.s[gamma]).collect();
    let index: BTreeMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &pr)| (pr, i))
        .collect();

    let mut act_l = BTreeMap::new();
    for a in 0..g.n_arrows() {
        for (i, &(x, gamma)) in pairs.iter().enumerate() {
            if g.s[a] == x {
                let out_gamma = h
                    .compose(f.on_arrows[a], gamma)
                    .ok_or_else(|| Error::BrokenBundle("f(g) gamma undefined".into()))?;
                act_l.insert((a, i), index[&(g.t[a], out_gamma)]);
            }
        }
    }
    let mut act_r = BTreeMap::new();
    for (i, &(x, gamma)) in pairs.iter().enumerate() {
        for nu in 0..h.n_arrows() {
            if h.s[gamma] == h.t[nu] {
                let out_gamma = h.compose(gamma, nu).expect("composable");
                act_r.insert((i, nu), index[&(x, out_gamma)]);
            }
        }
    }
    Ok(FinFunctorBundle {
        bundle: FinBibundle {
            source: g.clone(),
            target: h.clone(),
            total,
            a_l,
            a_r,
            act_l,
            act_r,
        },
        pairs,
    })
}

/// The functor of a section of the left anchor: `f(x) = aR(sigma(x))`,
/// and `f(g)` is the unique arrow `tau` with `sigma(t g).tau = g.sigma(s g)`.
pub fn functor_of_section(p: &FinBibundle, sigma: &[usize]) -> Result<FinFunctor, Error> {
    let g = &p.source;
    let h = &p.target;
    if sigma.len() != g.n_objects() {
        return Err(Error::NotASection {
            object: "(wrong length)".into(),
        });
    }
    for x in 0..g.n_objects() {
        if sigma[x] >= p.size() || p.a_l[sigma[x]] != x {
            return Err(Error::NotASection {
                object: g.objects[x].clone(),
            });
        }
    }
    let on_objects: Vec<usize> = sigma.iter().map(|&i| p.a_r[i]).collect();
    let mut on_arrows = Vec::with_capacity(g.n_arrows());
    for a in 0..g.n_arrows() {
        let (x, y) = (g.s[a], g.t[a]);
        let moved = *p
            .act_l
            .get(&(a, sigma[x]))
            .ok_or_else(|| Error::BrokenBundle("left action undefined on a section pair".into()))?;
        let taus: Vec<usize> = (0..h.n_arrows())
            .filter(|&tau| p.act_r.get(&(sigma[y], tau)) == Some(&moved))
            .collect();
        match taus.as_slice() {
            [tau] => on_arrows.push(*tau),
            _ => {
                return Err(Error::BrokenBundle(format!(
                    "{} arrows solve the section equation at {}",
                    taus.len(),
                    g.arrows[a]
                )))
            }
        }
    }
    Ok(FinFunctor {
        source: g.clone(),
        target: h.clone(),
        on_objects,
        on_arrows,
    })
}

/// Equivariant-bijection check for a candidate map between parallel
/// bibundles.
pub fn verify_bibundle_map(p: &FinBibundle, q: &FinBibundle, map: &[usize]) -> Report {
    let mut report = Report::new("fin_bibundle_map");
    let shapes_ok = p.source == q.source
        && p.target == q.target
        && map.len() == p.size()
        && map.iter().all(|&j| j < q.size());
    report.check(
        "shapes",
        shapes_ok,
        Some("bundles not parallel or map out of range".into()),
    );
    if !shapes_ok {
        return report;
    }
    let mut seen = vec![false; q.size()];
    let mut bij = p.size() == q.size();
    for &j in map {
        if seen[j] {
            bij = false;
            break;
        }
        seen[j] = true;
    }
    report.check("bijective", bij, Some("map is not a bijection".into()));

    let mut bad = None;
    for i in 0..p.size() {
        if q.a_l[map[i]] != p.a_l[i] || q.a_r[map[i]] != p.a_r[i] {
            bad = Some(format!("anchors disagree at {}", p.total[i]));
            break;
        }
    }
    report.check("anchors", bad.is_none(), bad);
    if !report.pass() {
        return report;
    }

    let mut bad = None;
    for (&(a, i), &j) in &p.act_l {
        if q.act_l.get(&(a, map[i])) != Some(&map[j]) {
            bad = Some(format!(
                "left equivariance fails at ({}, {})",
                p.source.arrows[a], p.total[i]
            ));
            break;
        }
    }
    report.check("left_equivariant", bad.is_none(), bad);

    let mut bad = None;
    for (&(i, a), &j) in &p.act_r {
        if q.act_r.get(&(map[i], a)) != Some(&map[j]) {
            bad = Some(format!(
                "right equivariance fails at ({}, {})",
                p.total[i], p.target.arrows[a]
            ));
            break;
        }
    }
    report.check("right_equivariant", bad.is_none(), bad);
    report
}

/// Natural transformation of a bibundle isomorphism `delta: <f> -> <k>`:
/// the component at `x` is the second leg of `delta(x, 1_{f(x)})`.
pub fn nat_of_bundle_iso(
    f: &FinFunctor,
    k: &FinFunctor,
    bf: &FinFunctorBundle,
    bk: &FinFunctorBundle,
    delta: &[usize],
) -> Result<FinNatTrans, Error> {
    let r = verify_bibundle_map(&bf.bundle, &bk.bundle, delta);
    if let Some(fail) = r.first_failure() {
        return Err(Error::NotEquivariant {
            check: fail.id.clone(),
        });
    }
    let sigma = bf.canonical_section(f);
    let component = (0..f.source.n_objects())
        .map(|x| {
            let (x2, gamma) = bk.pairs[delta[sigma[x]]];
            debug_assert_eq!(x2, x);
            let _ = k;
            gamma
        })
        .collect();
    Ok(FinNatTrans { component })
}

/// Bibundle isomorphism of a natural transformation:
/// `<alpha>(x, gamma) = (x, alpha(x) gamma)`.
pub fn bundle_iso_of_nat(
    f: &FinFunctor,
    k: &FinFunctor,
    bf: &FinFunctorBundle,
    bk: &FinFunctorBundle,
    alpha: &FinNatTrans,
) -> Result<Vec<usize>, Error> {
    let r = verify_nat(f, k, alpha);
    if let Some(fail) = r.first_failure() {
        return Err(Error::NotEquivariant {
            check: fail.id.clone(),
        });
    }
    let h = &f.target;
    bf.pairs
        .iter()
        .map(|&(x, gamma)| {
            let out = h
                .compose(alpha.component[x], gamma)
                .ok_or_else(|| Error::BrokenBundle("alpha(x) gamma undefined".into()))?;
            bk.index_of(x, out)
                .ok_or_else(|| Error::BrokenBundle("image pair missing from <k>".into()))
        })
        .collect()
}

/// `Q . P = (P x_{H0} Q) / H`: orbits of anchor-matched pairs under
/// `(p.eta, q) ~ (p, eta.q)`, with descended anchors and actions.
pub fn compose_bibundles(q: &FinBibundle, p: &FinBibundle) -> Result<FinBibundle, Error> {
    if p.target != q.source {
        return Err(Error::MiddleMismatch);
    }
    let h = &p.target;
    let mut pairs = Vec::new();
    for i in 0..p.size() {
        for j in 0..q.size() {
            if p.a_r[i] == q.a_l[j] {
                pairs.push((i, j));
            }
        }
    }
    let index: BTreeMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(n, &pr)| (pr, n)).collect();

    // union-find over pairs
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for eta in 0..h.n_arrows() {
        for i in 0..p.size() {
            if p.a_r[i] != h.t[eta] {
                continue;
            }
            let pi = p.act_r[&(i, eta)];
            for j in 0..q.size() {
                if q.a_l[j] != h.s[eta] {
                    continue;
                }
                let qj = q.act_l[&(eta, j)];
                let a = find(&mut parent, index[&(pi, j)]);
                let b = find(&mut parent, index[&(i, qj)]);
                parent[a] = b;
            }
        }
    }
    // orbit representatives in first-appearance order
    let mut orbit_of = vec![usize::MAX; pairs.len()];
    let mut reps = Vec::new();
    for n in 0..pairs.len() {
        let root = find(&mut parent, n);
        if orbit_of[root] == usize::MAX {
            orbit_of[root] = reps.len();
            reps.push(root);
        }
        orbit_of[n] = orbit_of[root];
    }

    let total: Vec<String> = reps
        .iter()
        .map(|&r| {
            let (i, j) = pairs[r];
            format!("[{}|{}]", p.total[i], q.total[j])
        })
        .collect();
    let a_l: Vec<usize> = reps.iter().map(|&r| p.a_l[pairs[r].0]).collect();
    let a_r: Vec<usize> = reps.iter().map(|&r| q.a_r[pairs[r].1]).collect();

    let mut act_l = BTreeMap::new();
    for a in 0..p.source.n_arrows() {
        for (o, &r) in reps.iter().enumerate() {
            let (i, j) = pairs[r];
            if p.source.s[a] == p.a_l[i] {
                let pi = p.act_l[&(a, i)];
                act_l.insert((a, o), orbit_of[index[&(pi, j)]]);
            }
        }
    }
    let mut act_r = BTreeMap::new();
    for (o, &r) in reps.iter().enumerate() {
        let (i, j) = pairs[r];
        for a in 0..q.target.n_arrows() {
            if q.a_r[j] == q.target.t[a] {
                let qj = q.act_r[&(j, a)];
                act_r.insert((o, a), orbit_of[index[&(i, qj)]]);
            }
        }
    }
    Ok(FinBibundle {
        source: p.source.clone(),
        target: q.target.clone(),
        total,
        a_l,
        a_r,
        act_l,
        act_r,
    })
}

/// Inverse of a biprincipal bibundle: same total set, anchors swapped,
/// actions twisted through the groupoid inverses.
pub fn reverse_bibundle(p: &FinBibundle) -> Result<FinBibundle, Error> {
    let r = biprincipality_report(p);
    if let Some(fail) = r.first_failure() {
        return Err(Error::NotBiprincipal {
            check: fail.id.clone(),
        });
    }
    let total = p.total.iter().map(|l| format!("{l}~")).collect();
    let mut act_l = BTreeMap::new();
    for (&(i, a), &j) in &p.act_r {
        // h . p~ := (p . h^{-1})~
        act_l.insert((p.target.inv[a], i), j);
    }
    let mut act_r = BTreeMap::new();
    for (&(a, i), &j) in &p.act_l {
        // p~ . g := (g^{-1} . p)~
        act_r.insert((i, p.source.inv[a]), j);
    }
    Ok(FinBibundle {
        source: p.target.clone(),
        target: p.source.clone(),
        total,
        a_l: p.a_r.clone(),
        a_r: p.a_l.clone(),
        act_l,
        act_r,
    })
}

/// Fully faithful + essentially surjective, cross-checkable against
/// `is_biprincipal(bundle_of_functor(f))`.
pub fn is_essential_equivalence(f: &FinFunctor) -> Report {
    let mut report = Report::new("essential_equivalence");
    report.absorb("functor", verify_functor(&f.clone()));
    if !report.pass() {
        return report;
    }
    let g = &f.source;
    let h = &f.target;
    let mut bad = None;
    for y in 0..h.n_objects() {
        let hit = (0..h.n_arrows())
            .any(|a| h.s[a] == y && f.on_objects.contains(&h.t[a]));
        if !hit {
            bad = Some(format!(
                "object {} is isomorphic to no image object",
                h.objects[y]
            ));
            break;
        }
    }
    report.check("essentially_surjective", bad.is_none(), bad);

    let mut bad = None;
    'ff: for x1 in 0..g.n_objects() {
        for x2 in 0..g.n_objects() {
            let dom = g.hom(x1, x2);
            let images: Vec<usize> = dom.iter().map(|&a| f.on_arrows[a]).collect();
            let cod = h.hom(f.on_objects[x1], f.on_objects[x2]);
            let mut sorted = images.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != images.len() || sorted != cod {
                bad = Some(format!(
                    "Hom({}, {}) -> Hom({}, {}) is not a bijection ({} vs {})",
                    g.objects[x1],
                    g.objects[x2],
                    h.objects[f.on_objects[x1]],
                    h.objects[f.on_objects[x2]],
                    dom.len(),
                    cod.len()
                ));
                break 'ff;
            }
        }
    }
    report.check("fully_faithful", bad.is_none(), bad);
    report
}

/// Restriction to a subset of objects, with the inclusion functor.
pub fn full_subgroupoid(
    g: &FinGroupoid,
    objects: &[usize],
) -> Result<(FinGroupoid, FinFunctor), Error> {
    if objects.is_empty() {
        return Err(Error::EmptyObjects);
    }
    let obj_idx: Vec<usize> = objects.to_vec();
    let in_sub = |x: usize| obj_idx.iter().position(|&y| y == x);
    let arr_idx: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| in_sub(g.s[a]).is_some() && in_sub(g.t[a]).is_some())
        .collect();
    let arr_pos = |a: usize| arr_idx.iter().position(|&b| b == a).unwrap();
    let sub = FinGroupoid::new(
        obj_idx.iter().map(|&x| g.objects[x].clone()).collect(),
        arr_idx.iter().map(|&a| g.arrows[a].clone()).collect(),
        arr_idx.iter().map(|&a| in_sub(g.s[a]).unwrap()).collect(),
        arr_idx.iter().map(|&a| in_sub(g.t[a]).unwrap()).collect(),
        obj_idx.iter().map(|&x| arr_pos(g.unit[x])).collect(),
        arr_idx.iter().map(|&a| arr_pos(g.inv[a])).collect(),
        arr_idx
            .iter()
            .enumerate()
            .flat_map(|(i2, &a2)| {
                arr_idx
                    .iter()
                    .enumerate()
                    .filter(move |&(_, &a1)| g.s[a2] == g.t[a1])
                    .map(move |(i1, &a1)| ((i2, i1), (a2, a1)))
            })
            .map(|((i2, i1), (a2, a1))| ((i2, i1), arr_pos(g.comp[&(a2, a1)])))
            .collect(),
    )?;
    let inclusion = FinFunctor {
        source: sub.clone(),
        target: g.clone(),
        on_objects: obj_idx,
        on_arrows: arr_idx,
    };
    Ok((sub, inclusion))
}

/// Linking groupoid of a Morita equivalence with its two embeddings.
#[derive(Debug, Clone)]
pub struct LinkingGroupoid {
    pub groupoid: FinGroupoid,
    pub w_g: FinFunctor,
    pub w_h: FinFunctor,
}

/// `G *_P H`: objects `G0 + H0`, arrows `G1 + P + P~ + H1`, with `P`-arrows
/// running `H0 -> G0` through the anchors and `P~` their formal inverses.
/// Mixed compositions come from the two actions and principality.
pub fn linking_groupoid(p: &FinBibundle) -> Result<LinkingGroupoid, Error> {
    let r = biprincipality_report(p);
    if let Some(fail) = r.first_failure() {
        return Err(Error::NotBiprincipal {
            check: fail.id.clone(),
        });
    }
    let g = &p.source;
    let h = &p.target;
    let np = p.size();
    let (og, oh) = (g.n_objects(), h.n_objects());
    let (ng, nh) = (g.n_arrows(), h.n_arrows());
    // arrow index layout: G1, P, P~, H1
    let poff = ng;
    let boff = ng + np;
    let hoff = ng + 2 * np;

    let mut objects = g.objects.clone();
    objects.extend(h.objects.iter().cloned());
    let mut arrows = g.arrows.clone();
    arrows.extend(p.total.iter().cloned());
    arrows.extend(p.total.iter().map(|l| format!("{l}~")));
    arrows.extend(h.arrows.iter().cloned());

    let mut s = g.s.clone();
    s.extend(p.a_r.iter().map(|&y| og + y));
    s.extend(p.a_l.iter().copied());
    s.extend(h.s.iter().map(|&y| og + y));
    let mut t = g.t.clone();
    t.extend(p.a_l.iter().copied());
    t.extend(p.a_r.iter().map(|&y| og + y));
    t.extend(h.t.iter().map(|&y| og + y));

    let mut unit = g.unit.clone();
    unit.extend(h.unit.iter().map(|&a| hoff + a));
    let mut inv = g.inv.clone();
    inv.extend((0..np).map(|i| boff + i));
    inv.extend((0..np).map(|i| poff + i));
    inv.extend(h.inv.iter().map(|&a| hoff + a));

    // the unique arrow carrying one bundle element to another, on each side
    let left_carrier = |from: usize, to: usize| -> usize {
        (0..ng)
            .find(|&a| p.act_l.get(&(a, from)) == Some(&to))
            .expect("left principality")
    };
    let right_carrier = |from: usize, to: usize| -> usize {
        (0..nh)
            .find(|&b| p.act_r.get(&(to, b)) == Some(&from))
            .expect("right principality")
    };

    let mut comp = BTreeMap::new();
    for a2 in 0..arrows.len() {
        for a1 in 0..arrows.len() {
            if s[a2] != t[a1] {
                continue;
            }
            let c = match (class(a2, poff, boff, hoff), class(a1, poff, boff, hoff)) {
                (Class::G, Class::G) => g.comp[&(a2, a1)],
                (Class::H, Class::H) => hoff + h.comp[&(a2 - hoff, a1 - hoff)],
                // g . p: left action
                (Class::G, Class::P) => poff + p.act_l[&(a2, a1 - poff)],
                // p . h: right action
                (Class::P, Class::H) => poff + p.act_r[&(a2 - poff, a1 - hoff)],
                // p~ . g = (g^{-1} . p)~
                (Class::B, Class::G) => {
                    boff + p.act_l[&(g.inv[a1], a2 - boff)]
                }
                // h . p~ = (p . h^{-1})~
                (Class::H, Class::B) => boff + p.act_r[&(a1 - boff, h.inv[a2 - hoff])],
                // p2 . p1~: the unique g with g . p1 = p2
                (Class::P, Class::B) => left_carrier(a1 - boff, a2 - poff),
                // p2~ . p1: the unique eta with p2 . eta = p1
                (Class::B, Class::P) => hoff + right_carrier(a1 - poff, a2 - boff),
                _ => unreachable!("boundary classes exclude other mixes"),
            };
            comp.insert((a2, a1), c);
        }
    }
    let groupoid = FinGroupoid::new(objects, arrows, s, t, unit, inv, comp)?;
    let w_g = FinFunctor {
        source: g.clone(),
        target: groupoid.clone(),
        on_objects: (0..og).collect(),
        on_arrows: (0..ng).collect(),
    };
    let w_h = FinFunctor {
        source: h.clone(),
        target: groupoid.clone(),
        on_objects: (0..oh).map(|y| og + y).collect(),
        on_arrows: (0..nh).map(|a| hoff + a).collect(),
    };
    Ok(LinkingGroupoid { groupoid, w_g, w_h })
}

#[derive(Clone, Copy, PartialEq)]
enum Class {
    G,
    P,
    B,
    H,
}

fn class(a: usize, poff: usize, boff: usize, hoff: usize) -> Class {
    if a < poff {
        Class::G
    } else if a < boff {
        Class::P
    } else if a < hoff {
        Class::B
    } else {
        Class::H
    }
}

/// Exhaustive search for a bibundle isomorphism: backtracking over
/// anchor-compatible assignments with equivariant closure propagation.
/// A seed permutes the candidate order for reproducible variation.
pub fn find_bibundle_iso(p: &FinBibundle, q: &FinBibundle, seed: Option<u64>) -> Option<Vec<usize>> {
    if p.source != q.source || p.target != q.target || p.size() != q.size() {
        return None;
    }
    let n = p.size();
    let mut order: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| q.a_l[j] == p.a_l[i] && q.a_r[j] == p.a_r[i])
                .collect()
        })
        .collect();
    if let Some(s) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        for cands in &mut order {
            cands.shuffle(&mut rng);
        }
    }
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if backtrack(p, q, &order, &mut assign, &mut used) {
        Some(assign)
    } else {
        None
    }
}

fn backtrack(
    p: &FinBibundle,
    q: &FinBibundle,
    order: &[Vec<usize>],
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    let Some(i) = assign.iter().position(|&j| j == usize::MAX) else {
        return verify_bibundle_map(p, q, assign).pass();
    };
    for &j in &order[i] {
        if used[j] {
            continue;
        }
        let saved_assign = assign.clone();
        let saved_used = used.clone();
        if propagate(p, q, assign, used, i, j)
            && backtrack(p, q, order, assign, used)
        {
            return true;
        }
        *assign = saved_assign;
        *used = saved_used;
    }
    false
}

/// Set `assign[i] = j` and force the closure under both actions; reports
/// false on any clash.
fn propagate(
    p: &FinBibundle,
    q: &FinBibundle,
    assign: &mut [usize],
    used: &mut [bool],
    i: usize,
    j: usize,
) -> bool {
    let mut queue = vec![(i, j)];
    while let Some((i, j)) = queue.pop() {
        if assign[i] != usize::MAX {
            if assign[i] != j {
                return false;
            }
            continue;
        }
        if used[j] || q.a_l[j] != p.a_l[i] || q.a_r[j] != p.a_r[i] {
            return false;
        }
        assign[i] = j;
        used[j] = true;
        for a in 0..p.source.n_arrows() {
            if let Some(&i2) = p.act_l.get(&(a, i)) {
                match q.act_l.get(&(a, j)) {
                    Some(&j2) => queue.push((i2, j2)),
                    None => return false,
                }
            }
        }
        for b in 0..p.target.n_arrows() {
            if let Some(&i2) = p.act_r.get(&(i, b)) {
                match q.act_r.get(&(j, b)) {
                    Some(&j2) => queue.push((i2, j2)),
                    None => return false,
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

/// One object, one arrow.
pub fn pt_groupoid() -> FinGroupoid {
    let mut comp = BTreeMap::new();
    comp.insert((0, 0), 0);
    FinGroupoid::new(
        vec!["*".into()],
        vec!["1*".into()],
        vec![0],
        vec![0],
        vec![0],
        vec![0],
        comp,
    )
    .expect("tiny")
}

/// Discrete groupoid: identities only.
pub fn disc(labels: &[&str]) -> FinGroupoid {
    let n = labels.len();
    FinGroupoid::new(
        labels.iter().map(|l| l.to_string()).collect(),
        labels.iter().map(|l| format!("1{l}")).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).collect(),
        (0..n).map(|i| ((i, i), i)).collect(),
    )
    .expect("size")
}

/// Codiscrete (pair) groupoid: one arrow `j -> i` per ordered pair.
pub fn codisc(labels: &[&str]) -> FinGroupoid {
    connected(labels, 1)
}

/// One object, cyclic group of order `n`.
pub fn cyclic(n: usize) -> FinGroupoid {
    assert!(n >= 1);
    FinGroupoid::new(
        vec!["*".into()],
        (0..n).map(|k| format!("r{k}")).collect(),
        vec![0; n],
        vec![0; n],
        vec![0],
        (0..n).map(|k| (n - k) % n).collect(),
        (0..n)
            .flat_map(|a| (0..n).map(move |b| ((a, b), (a + b) % n)))
            .collect(),
    )
    .expect("size")
}

/// Connected groupoid: pair groupoid on `labels` with cyclic isotropy of
/// order `n`. Arrow `(i, j, k)` runs `j -> i`.
pub fn connected(labels: &[&str], n: usize) -> FinGroupoid {
    assert!(n >= 1 && !labels.is_empty());
    let m = labels.len();
    let idx = |i: usize, j: usize, k: usize| (i * m + j) * n + k;
    let n1 = m * m * n;
    let mut comp = BTreeMap::new();
    for i in 0..m {
        for j in 0..m {
            for l in 0..m {
                for k1 in 0..n {
                    for k2 in 0..n {
                        comp.insert(
                            (idx(i, j, k1), idx(j, l, k2)),
                            idx(i, l, (k1 + k2) % n),
                        );
                    }
                }
            }
        }
    }
    FinGroupoid::new(
        labels.iter().map(|l| l.to_string()).collect(),
        (0..n1)
            .map(|a| {
                let (i, j, k) = (a / (m * n), (a / n) % m, a % n);
                format!("{}<-{}:{}", labels[i], labels[j], k)
            })
            .collect(),
        (0..n1).map(|a| (a / n) % m).collect(),
        (0..n1).map(|a| a / (m * n)).collect(),
        (0..m).map(|i| idx(i, i, 0)).collect(),
        (0..n1)
            .map(|a| {
                let (i, j, k) = (a / (m * n), (a / n) % m, a % n);
                idx(j, i, (n - k) % n)
            })
            .collect(),
        comp,
    )
    .expect("size")
}

/// Disjoint union of two groupoids.
pub fn disjoint_union(g: &FinGroupoid, h: &FinGroupoid) -> FinGroupoid {
    let (og, ng) = (g.n_objects(), g.n_arrows());
    let mut objects = g.objects.clone();
    objects.extend(h.objects.iter().map(|l| format!("{l}'")));
    let mut arrows = g.arrows.clone();
    arrows.extend(h.arrows.iter().map(|l| format!("{l}'")));
    let mut s = g.s.clone();
    s.extend(h.s.iter().map(|&x| og + x));
    let mut t = g.t.clone();
    t.extend(h.t.iter().map(|&x| og + x));
    let mut unit = g.unit.clone();
    unit.extend(h.unit.iter().map(|&a| ng + a));
    let mut inv = g.inv.clone();
    inv.extend(h.inv.iter().map(|&a| ng + a));
    let mut comp = g.comp.clone();
    for (&(a2, a1), &c) in &h.comp {
        comp.insert((ng + a2, ng + a1), ng + c);
    }
    FinGroupoid::new(objects, arrows, s, t, unit, inv, comp).expect("size")
}

/// The 2-element Morita bundle between the point and the pair groupoid:
/// `<f>` for the inclusion `* -> a`.
pub fn point_codisc_bundle() -> (FinFunctor, FinFunctorBundle) {
    let g = pt_groupoid();
    let h = codisc(&["a", "b"]);
    let f = FinFunctor {
        source: g,
        target: h.clone(),
        on_objects: vec![0],
        on_arrows: vec![h.unit[0]],
    };
    let b = bundle_of_functor(&f).expect("functor");
    (f, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_verify() {
        for g in [
            pt_groupoid(),
            disc(&["1", "2"]),
            codisc(&["a", "b"]),
            cyclic(2),
            cyclic(3),
            connected(&["a", "b", "c"], 2),
            disjoint_union(&cyclic(2), &codisc(&["a", "b"])),
        ] {
            let r = verify_groupoid(&g);
            assert!(r.pass(), "{r}");
        }
    }

    #[test]
    fn codisc_two_has_four_arrows() {
        let g = codisc(&["a", "b"]);
        assert_eq!(g.n_arrows(), 4);
        assert!(verify_groupoid(&g).pass());
    }

    #[test]
    fn corrupted_cyclic_names_triple() {
        let mut g = cyclic(2);
        g.comp.insert((1, 1), 1); // r1 r1 = r1: breaks inverses/associativity
        let r = verify_groupoid(&g);
        assert!(!r.pass());
        let fail = r.first_failure().unwrap();
        assert!(fail.detail.is_some());
    }

    #[test]
    fn size_guard_rejects() {
        let labels: Vec<String> = (0..200).map(|i| i.to_string()).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        // codisc on 200 objects has 40000 arrows
        let m = refs.len();
        let err = FinGroupoid::new(
            labels.clone(),
            (0..m * m).map(|i| i.to_string()).collect(),
            vec![0; m * m],
            vec![0; m * m],
            vec![0; m],
            vec![0; m * m],
            BTreeMap::new(),
        );
        assert!(matches!(err, Err(Error::TooLarge { .. })));
    }

    #[test]
    fn bundle_of_inclusion_functor() {
        let (_, b) = point_codisc_bundle();
        assert_eq!(b.bundle.size(), 2);
        assert!(verify_bibundle(&b.bundle).pass());
        // aR hits both objects
        let mut hits = b.bundle.a_r.clone();
        hits.sort_unstable();
        assert_eq!(hits, vec![0, 1]);
    }

    #[test]
    fn identity_bundle_is_arrows() {
        let g = cyclic(2);
        let b = bundle_of_functor(&FinFunctor::identity(&g)).unwrap();
        assert_eq!(b.bundle.size(), 2);
        assert!(verify_bibundle(&b.bundle).pass());
        assert!(is_biprincipal(&b.bundle));
    }

    #[test]
    fn disc_to_point_bundle() {
        let f = FinFunctor {
            source: disc(&["1", "2"]),
            target: pt_groupoid(),
            on_objects: vec![0, 0],
            on_arrows: vec![0, 0],
        };
        let b = bundle_of_functor(&f).unwrap();
        assert_eq!(b.bundle.size(), 2);
        assert!(verify_bibundle(&b.bundle).pass());
        assert!(!is_biprincipal(&b.bundle));
    }

    #[test]
    fn canonical_section_recovers_functor() {
        let (f, b) = point_codisc_bundle();
        let sigma = b.canonical_section(&f);
        let back = functor_of_section(&b.bundle, &sigma).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn other_section_gives_isomorphic_functor() {
        let (f, b) = point_codisc_bundle();
        // the non-canonical point of the 2-element bundle
        let sigma0 = b.canonical_section(&f)[0];
        let other = if sigma0 == 0 { 1 } else { 0 };
        let k = functor_of_section(&b.bundle, &[other]).unwrap();
        assert!(verify_functor(&k).pass());
        assert_eq!(k.on_objects, vec![1]); // lands on b
        assert_ne!(k, f);
    }

    #[test]
    fn non_section_rejected() {
        let (_, b) = point_codisc_bundle();
        let err = functor_of_section(&b.bundle, &[5]);
        assert!(matches!(err, Err(Error::NotASection { .. })));
    }

    #[test]
    fn nat_bundle_iso_round_trip() {
        let g = pt_groupoid();
        let h = codisc(&["a", "b"]);
        let f = FinFunctor {
            source: g.clone(),
            target: h.clone(),
            on_objects: vec![0],
            on_arrows: vec![h.unit[0]],
        };
        let k = FinFunctor {
            source: g.clone(),
            target: h.clone(),
            on_objects: vec![1],
            on_arrows: vec![h.unit[1]],
        };
        let bf = bundle_of_functor(&f).unwrap();
        let bk = bundle_of_functor(&k).unwrap();
        // alpha(*): a -> b
        let ab = h.hom(0, 1)[0];
        let alpha = FinNatTrans {
            component: vec![ab],
        };
        assert!(verify_nat(&f, &k, &alpha).pass());
        let delta = bundle_iso_of_nat(&f, &k, &bf, &bk, &alpha).unwrap();
        assert!(verify_bibundle_map(&bf.bundle, &bk.bundle, &delta).pass());
        let back = nat_of_bundle_iso(&f, &k, &bf, &bk, &delta).unwrap();
        assert_eq!(back, alpha);
    }

    #[test]
    fn identity_iso_gives_unit_components() {
        let (f, bf) = point_codisc_bundle();
        let delta: Vec<usize> = (0..bf.bundle.size()).collect();
        let alpha = nat_of_bundle_iso(&f, &f, &bf, &bf, &delta).unwrap();
        assert_eq!(alpha.component, vec![f.target.unit[0]]);
    }

    #[test]
    fn compose_matches_composite_functor() {
        let g = pt_groupoid();
        let h = codisc(&["a", "b"]);
        let k = connected(&["u", "v"], 2);
        let f = FinFunctor {
            source: g,
            target: h.clone(),
            on_objects: vec![0],
            on_arrows: vec![h.unit[0]],
        };
        let g2 = FinFunctor {
            source: h.clone(),
            target: k.clone(),
            on_objects: vec![0, 1],
            on_arrows: (0..h.n_arrows())
                .map(|a| {
                    // a<-b:0 style embedding with trivial isotropy leg
                    let (i, j) = (h.t[a], h.s[a]);
                    (i * 2 + j) * 2
                })
                .collect(),
        };
        assert!(verify_functor(&g2).pass());
        let bf = bundle_of_functor(&f).unwrap();
        let bg = bundle_of_functor(&g2).unwrap();
        let bgf = bundle_of_functor(&FinFunctor::compose(&g2, &f)).unwrap();
        let c = compose_bibundles(&bg.bundle, &bf.bundle).unwrap();
        assert!(verify_bibundle(&c).pass());
        let iso = find_bibundle_iso(&c, &bgf.bundle, None).unwrap();
        assert!(verify_bibundle_map(&c, &bgf.bundle, &iso).pass());
    }

    #[test]
    fn morita_pair_composes_to_identity() {
        let (_, b) = point_codisc_bundle();
        assert!(is_biprincipal(&b.bundle));
        let rev = reverse_bibundle(&b.bundle).unwrap();
        assert!(verify_bibundle(&rev).pass());
        let c = compose_bibundles(&rev, &b.bundle).unwrap();
        let idb = bundle_of_functor(&FinFunctor::identity(&b.bundle.source)).unwrap();
        let iso = find_bibundle_iso(&c, &idb.bundle, None).unwrap();
        assert!(verify_bibundle_map(&c, &idb.bundle, &iso).pass());
    }

    #[test]
    fn unit_law_up_to_iso() {
        let (_, b) = point_codisc_bundle();
        let idb = bundle_of_functor(&FinFunctor::identity(&b.bundle.source)).unwrap();
        let c = compose_bibundles(&b.bundle, &idb.bundle).unwrap();
        let iso = find_bibundle_iso(&c, &b.bundle, None).unwrap();
        assert!(verify_bibundle_map(&c, &b.bundle, &iso).pass());
    }

    #[test]
    fn essential_equivalence_examples() {
        let (f, _) = point_codisc_bundle();
        assert!(is_essential_equivalence(&f).pass());
        let d = FinFunctor {
            source: disc(&["1", "2"]),
            target: pt_groupoid(),
            on_objects: vec![0, 0],
            on_arrows: vec![0, 0],
        };
        let r = is_essential_equivalence(&d);
        assert!(r.get("essentially_surjective").unwrap().pass);
        assert!(!r.get("fully_faithful").unwrap().pass);
        let g = cyclic(3);
        assert!(is_essential_equivalence(&FinFunctor::identity(&g)).pass());
    }

    #[test]
    fn full_subgroupoid_examples() {
        let g = codisc(&["a", "b"]);
        let (sub, inc) = full_subgroupoid(&g, &[0]).unwrap();
        assert_eq!(sub.n_arrows(), 1);
        assert!(verify_functor(&inc).pass());
        assert!(is_essential_equivalence(&inc).pass());

        let d = disc(&["1", "2"]);
        let (_, inc) = full_subgroupoid(&d, &[0]).unwrap();
        assert!(!is_essential_equivalence(&inc)
            .get("essentially_surjective")
            .unwrap()
            .pass);

        let (sub, _) = full_subgroupoid(&g, &[0, 1]).unwrap();
        assert_eq!(sub, g);
        assert!(matches!(full_subgroupoid(&g, &[]), Err(Error::EmptyObjects)));
    }

    #[test]
    fn linking_of_point_codisc_is_codisc3() {
        let (_, b) = point_codisc_bundle();
        let link = linking_groupoid(&b.bundle).unwrap();
        assert_eq!(link.groupoid.n_objects(), 3);
        assert_eq!(link.groupoid.n_arrows(), 9);
        let r = verify_groupoid(&link.groupoid);
        assert!(r.pass(), "{r}");
        assert!(is_essential_equivalence(&link.w_g).pass());
        assert!(is_essential_equivalence(&link.w_h).pass());
    }

    #[test]
    fn linking_of_identity_on_cyclic2() {
        let g = cyclic(2);
        let b = bundle_of_functor(&FinFunctor::identity(&g)).unwrap();
        let link = linking_groupoid(&b.bundle).unwrap();
        assert_eq!(link.groupoid.n_objects(), 2);
        assert_eq!(link.groupoid.n_arrows(), 8);
        assert!(verify_groupoid(&link.groupoid).pass());
    }

    #[test]
    fn linking_satisfies_wh_p_iso_wg() {
        let (_, b) = point_codisc_bundle();
        for bundle in [b.bundle.clone(), {
            let g = cyclic(2);
            bundle_of_functor(&FinFunctor::identity(&g)).unwrap().bundle
        }] {
            let link = linking_groupoid(&bundle).unwrap();
            let bwg = bundle_of_functor(&link.w_g).unwrap();
            let bwh = bundle_of_functor(&link.w_h).unwrap();
            let c = compose_bibundles(&bwh.bundle, &bundle).unwrap();
            let iso = find_bibundle_iso(&c, &bwg.bundle, None).expect("oracle iso");
            assert!(verify_bibundle_map(&c, &bwg.bundle, &iso).pass());
        }
    }

    #[test]
    fn non_biprincipal_linking_rejected() {
        let f = FinFunctor {
            source: disc(&["1", "2"]),
            target: pt_groupoid(),
            on_objects: vec![0, 0],
            on_arrows: vec![0, 0],
        };
        let b = bundle_of_functor(&f).unwrap();
        assert!(matches!(
            linking_groupoid(&b.bundle),
            Err(Error::NotBiprincipal { .. })
        ));
    }

    #[test]
    fn seeded_iso_search_agrees() {
        let (_, b) = point_codisc_bundle();
        let idb = bundle_of_functor(&FinFunctor::identity(&b.bundle.source)).unwrap();
        let c = compose_bibundles(&b.bundle, &idb.bundle).unwrap();
        for seed in [0u64, 7, 42] {
            let iso = find_bibundle_iso(&c, &b.bundle, Some(seed)).unwrap();
            assert!(verify_bibundle_map(&c, &b.bundle, &iso).pass());
        }
    }
}
