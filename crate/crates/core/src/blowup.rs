//! Compactification and cascades of point blow-ups.
//!
//! Every chart stores its field, its map to the parent chart and to the root
//! `(y, z)` chart, and the local equations of the tracked curves (the line at
//! infinity and the exceptional curves) that are visible in it.

use crate::coeff::Rules;
use crate::expr::{fmt_poly, VarNames};
use crate::field::{common_den_many, pullback, FieldError, Frac};
use crate::par::{self, Exec};
use crate::poly::{content_in, gcd, primpart_in, squarefree_in, Poly, Var, Q};
use crate::system::{ChartPolicy, PlanarSystem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::fmt;

pub const DEFAULT_MAX_DEPTH: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    Root,
    /// `(u0, v0) = (1/z, y/z)`
    InfU,
    /// `(U0, V0) = (z/y, 1/y)`
    InfBigU,
    /// `(u + a, u v + b)`
    UChild,
    /// `(U V + a, V + b)`
    BigUChild,
    /// `(u + a, u / v + b)`
    Tilde,
}

impl ChartKind {
    fn prefix(self) -> (&'static str, &'static str) {
        match self {
            ChartKind::Root => ("y", "z"),
            ChartKind::InfU | ChartKind::UChild => ("u", "v"),
            ChartKind::InfBigU | ChartKind::BigUChild => ("U", "V"),
            ChartKind::Tilde => ("~u", "~v"),
        }
    }

    /// Chart variable whose zero set is the newest tracked curve.
    fn exceptional_var(self) -> Var {
        match self {
            ChartKind::BigUChild | ChartKind::InfBigU => Var::V,
            _ => Var::U,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Orient {
    U,
    BigU,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Curve {
    /// The line at infinity.
    Line,
    /// Exceptional curve `E_k`, 1-based.
    Exc(usize),
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Line => write!(f, "L"),
            Curve::Exc(k) => write!(f, "E{k}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Chart {
    pub id: usize,
    pub parent: Option<usize>,
    pub kind: ChartKind,
    pub label: String,
    pub names: VarNames,
    /// Index of the blow-up that created the chart.
    pub created_by: Option<usize>,
    pub to_parent: (Frac, Frac),
    pub to_root: (Frac, Frac),
    pub field: (Frac, Frac),
    pub curves: Vec<(Curve, Poly)>,
}

impl Chart {
    pub fn is_polynomial(&self) -> bool {
        self.field.0.is_poly() && self.field.1.is_poly()
    }

    /// The chart field as a planar system over the same coefficient ring.
    pub fn system(&self, base: &PlanarSystem) -> Option<PlanarSystem> {
        let f = self.field.0.as_poly()?.clone();
        let g = self.field.1.as_poly()?.clone();
        let mut s = PlanarSystem::new(&self.label, self.names.clone(), f, g, base.rules.clone());
        s.params.extend(base.params.iter().cloned());
        s.abbrevs = base.abbrevs.clone();
        s.policy = base.policy;
        Some(s)
    }
}

#[derive(Clone, Debug)]
pub struct Blowup {
    /// 1-based; the blow-up creates `E_index`.
    pub index: usize,
    pub cascade: usize,
    pub chart: usize,
    pub center: (Poly, Poly),
    /// Tracked curves through the center.
    pub on_curves: Vec<Curve>,
    /// u-child and U-child.
    pub children: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CascadeStatus {
    Regular,
    Obstructed { conditions: Vec<Poly>, issues: Vec<String> },
    DepthExceeded { frontier: Vec<(usize, Poly, Poly)> },
}

#[derive(Clone, Debug)]
pub struct Cascade {
    pub blowups: Vec<usize>,
    pub status: CascadeStatus,
    /// Children of the final blow-up of each branch.
    pub leaves: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub max_depth: usize,
    pub exec: Exec,
    /// Overrides the system's chart policy.
    pub policy: Option<ChartPolicy>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_depth: DEFAULT_MAX_DEPTH, exec: Exec::default(), policy: None }
    }
}

/// `(chart label, first, second)` of one blow-up.
pub type Center = (String, Poly, Poly);

#[derive(Clone, Debug)]
pub struct BlowupTree {
    pub system: PlanarSystem,
    pub charts: Vec<Chart>,
    pub blowups: Vec<Blowup>,
    pub cascades: Vec<Cascade>,
    /// Problems found on the line at infinity itself.
    pub line_issues: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum BlowupError {
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl BlowupTree {
    pub fn is_regular(&self) -> bool {
        self.line_issues.is_empty() && self.cascades.iter().all(|c| c.status == CascadeStatus::Regular)
    }

    pub fn conditions(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        for c in &self.cascades {
            if let CascadeStatus::Obstructed { conditions, .. } = &c.status {
                out.extend(conditions.iter().cloned());
            }
        }
        out
    }

    pub fn chart(&self, id: usize) -> &Chart {
        &self.charts[id]
    }

    /// Centers in order.
    pub fn centers(&self) -> Vec<Center> {
        self.blowups.iter().map(|b| (self.charts[b.chart].label.clone(), b.center.0.clone(), b.center.1.clone())).collect()
    }

    /// Centers grouped by cascade.
    pub fn cascade_centers(&self) -> Vec<Vec<Center>> {
        self.cascades
            .iter()
            .map(|c| {
                c.blowups
                    .iter()
                    .map(|&k| {
                        let b = &self.blowups[k - 1];
                        (self.charts[b.chart].label.clone(), b.center.0.clone(), b.center.1.clone())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn leaves(&self) -> Vec<&Chart> {
        self.cascades.iter().flat_map(|c| c.leaves.iter().map(|&i| &self.charts[i])).collect()
    }

    /// One line per blow-up.
    pub fn describe(&self) -> String {
        let names = VarNames::default();
        let mut out = String::new();
        for (ci, c) in self.cascades.iter().enumerate() {
            out.push_str(&format!("cascade {}\n", ci + 1));
            for &k in &c.blowups {
                let b = &self.blowups[k - 1];
                let ch = &self.charts[b.chart];
                let on: Vec<String> = b.on_curves.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!(
                    "  E{:<3} ({}, {}) = ({}, {})",
                    b.index,
                    ch.names.first,
                    ch.names.second,
                    fmt_poly(&b.center.0, &names),
                    fmt_poly(&b.center.1, &names)
                ));
                if !on.is_empty() {
                    out.push_str(&format!("  on {}", on.join(" ")));
                }
                out.push('\n');
            }
            match &c.status {
                CascadeStatus::Regular => out.push_str("  regular\n"),
                CascadeStatus::Obstructed { conditions, issues } => {
                    for p in conditions {
                        out.push_str(&format!("  condition {} = 0\n", fmt_poly(p, &names)));
                    }
                    for i in issues {
                        out.push_str(&format!("  issue: {i}\n"));
                    }
                }
                CascadeStatus::DepthExceeded { frontier } => {
                    for (id, a, b) in frontier {
                        out.push_str(&format!(
                            "  depth exceeded at {} ({}, {})\n",
                            self.charts[*id].label,
                            fmt_poly(a, &names),
                            fmt_poly(b, &names)
                        ));
                    }
                }
            }
        }
        for i in &self.line_issues {
            out.push_str(&format!("line at infinity: {i}\n"));
        }
        out
    }
}

fn root_chart(s: &PlanarSystem) -> Chart {
    Chart {
        id: 0,
        parent: None,
        kind: ChartKind::Root,
        label: "root".into(),
        names: s.names.clone(),
        created_by: None,
        to_parent: (Frac::u(), Frac::v()),
        to_root: (Frac::u(), Frac::v()),
        field: s.field(),
        curves: Vec::new(),
    }
}

/// The two charts at infinity, `u0` and `U0`.
pub fn compactify(s: &PlanarSystem) -> Result<(Chart, Chart), FieldError> {
    let (f, g) = s.field();
    let rules = &s.rules;
    let (u, v) = (Frac::u(), Frac::v());
    // (y, z) = (v/u, 1/u)
    let phi = (v.div(&u)?, u.inv()?);
    let fu = f.subs(&phi, rules)?;
    let gu = g.subs(&phi, rules)?;
    let u2 = &u * &u;
    let up = -&(&u2 * &gu);
    let vp = &(&u * &fu) - &(&(&u * &v) * &gu);
    let c1 = Chart {
        id: 1,
        parent: Some(0),
        kind: ChartKind::InfU,
        label: "u0".into(),
        names: VarNames::new("u0", "v0"),
        created_by: None,
        to_parent: phi.clone(),
        to_root: phi,
        field: (up.reduce(rules), vp.reduce(rules)),
        curves: vec![(Curve::Line, Poly::u())],
    };
    // (y, z) = (1/V, U/V)
    let phi = (v.inv()?, u.div(&v)?);
    let fu = f.subs(&phi, rules)?;
    let gu = g.subs(&phi, rules)?;
    let v2 = &v * &v;
    let bigup = &(&v * &gu) - &(&(&u * &v) * &fu);
    let bigvp = -&(&v2 * &fu);
    let c2 = Chart {
        id: 2,
        parent: Some(0),
        kind: ChartKind::InfBigU,
        label: "U0".into(),
        names: VarNames::new("U0", "V0"),
        created_by: None,
        to_parent: phi.clone(),
        to_root: phi,
        field: (bigup.reduce(rules), bigvp.reduce(rules)),
        curves: vec![(Curve::Line, Poly::v())],
    };
    Ok((c1, c2))
}

fn child_map(kind: ChartKind, a: &Poly, b: &Poly) -> Result<(Frac, Frac), FieldError> {
    let (u, v) = (Frac::u(), Frac::v());
    let (a, b) = (Frac::from_poly(a.clone()), Frac::from_poly(b.clone()));
    Ok(match kind {
        ChartKind::UChild => (&u + &a, &(&u * &v) + &b),
        ChartKind::BigUChild => (&(&u * &v) + &a, &v + &b),
        ChartKind::Tilde => (&u + &a, &u.div(&v)? + &b),
        _ => unreachable!("not a blow-up chart"),
    })
}

fn at_point(p: &Poly, a: &Poly, b: &Poly, rules: &Rules) -> Poly {
    rules.reduce(&p.subs(&Var::U, a).subs(&Var::V, b))
}

/// Strict transform of a curve equation under a blow-up chart map.
fn strict_transform(eq: &Poly, phi: &(Frac, Frac), evar: &Var, rules: &Rules) -> Result<Option<Poly>, FieldError> {
    let t = Frac::from_poly(eq.clone()).subs(phi, rules)?;
    let mut n = t.num().clone();
    let k = n.min_degree_in(evar);
    if k > 0 {
        n = n.exact_div(&Poly::var(evar.clone()).pow(k)).expect("power divides");
    }
    // a chart variable factor coming from the flip is a unit along the curve
    if n.has_chart_vars() {
        let other = if *evar == Var::U { Var::V } else { Var::U };
        let j = n.min_degree_in(&other);
        if j > 0 && phi.1.den_factors().iter().any(|(f, _)| *f == Poly::var(other.clone())) {
            n = n.exact_div(&Poly::var(other).pow(j)).expect("power divides");
        }
    }
    if n.has_chart_vars() {
        Ok(Some(n.monic()))
    } else {
        Ok(None)
    }
}

struct Ctx<'a> {
    rules: &'a Rules,
    policy: ChartPolicy,
    max_depth: usize,
    roots: &'a [Chart],
}

/// Charts and blow-ups of a single cascade, numbered locally (charts from 3,
/// blow-ups from 1).
struct Local {
    charts: Vec<Chart>,
    blowups: Vec<Blowup>,
    status: CascadeStatus,
    leaves: Vec<usize>,
}

#[derive(Clone)]
struct Pending {
    chart: usize,
    a: Poly,
    b: Poly,
    orient: Orient,
    flipped: bool,
    depth: usize,
}

const LOCAL_BASE: usize = 3;

impl Local {
    fn get<'b>(&'b self, ctx: &'b Ctx, id: usize) -> &'b Chart {
        if id < LOCAL_BASE {
            &ctx.roots[id]
        } else {
            &self.charts[id - LOCAL_BASE]
        }
    }

    fn make_child(
        &mut self,
        ctx: &Ctx,
        parent: usize,
        kind: ChartKind,
        a: &Poly,
        b: &Poly,
        k: usize,
    ) -> Result<usize, FieldError> {
        let p = self.get(ctx, parent);
        let phi = child_map(kind, a, b)?;
        let field = pullback(&p.field, &phi, ctx.rules)?;
        let to_root = (p.to_root.0.subs(&phi, ctx.rules)?, p.to_root.1.subs(&phi, ctx.rules)?);
        let evar = kind.exceptional_var();
        let mut curves = Vec::new();
        for (c, eq) in &p.curves {
            if let Some(t) = strict_transform(eq, &phi, &evar, ctx.rules)? {
                curves.push((c.clone(), t));
            }
        }
        curves.push((Curve::Exc(k), Poly::var(evar)));
        let id = LOCAL_BASE + self.charts.len();
        self.charts.push(Chart {
            id,
            parent: Some(parent),
            kind,
            label: String::new(),
            names: VarNames::default(),
            created_by: Some(k),
            to_parent: phi,
            to_root,
            field: (field.0.reduce(ctx.rules), field.1.reduce(ctx.rules)),
            curves,
        });
        Ok(id)
    }
}

/// Field data restricted to the curve `evar = 0`, in the coordinate `w`.
struct LineData {
    w: Var,
    /// Restricted numerator, restricted denominator factors, pole along the line.
    comps: Vec<(Poly, Vec<Poly>, bool)>,
    nums: Vec<Poly>,
    den: Vec<(Poly, u32)>,
    den_zero: bool,
}

impl LineData {
    fn new(field: &(Frac, Frac), evar: &Var) -> LineData {
        let w = if *evar == Var::U { Var::V } else { Var::U };
        let mut comps = Vec::new();
        for fr in [&field.0, &field.1] {
            let n = fr.num().at_zero(evar);
            let ds: Vec<Poly> = fr.den_factors().iter().map(|(f, _)| f.at_zero(evar)).collect();
            let pole = ds.iter().any(|d| d.is_zero());
            comps.push((n, ds, pole));
        }
        let (ns, _, fs) = common_den_many(&[&field.0, &field.1]);
        let nums: Vec<Poly> = ns.iter().map(|n| n.at_zero(evar)).collect();
        let den: Vec<(Poly, u32)> = fs.iter().map(|(f, e)| (f.at_zero(evar), *e)).collect();
        let den_zero = den.iter().any(|(f, _)| f.is_zero());
        LineData { w, comps, nums, den, den_zero }
    }

    fn accepts(&self, l: &Poly) -> bool {
        if !self.nums.iter().all(|n| l.divides(n)) {
            return false;
        }
        if !self.den_zero && !self.den.iter().any(|(f, _)| l.divides(f)) {
            return false;
        }
        self.comps.iter().any(|(n, ds, pole)| l.divides(n) && (*pole || ds.iter().any(|d| l.divides(d))))
    }

    /// Coefficient-only common content; `None` when the line is entirely
    /// indeterminate.
    fn condition(&self) -> Option<Poly> {
        let mut g = Poly::zero();
        for n in &self.nums {
            g = gcd(&g, &content_in(n, &self.w));
            if g.is_one() {
                return Some(g);
            }
        }
        if !self.den_zero {
            let mut c = Poly::one();
            for (f, e) in &self.den {
                c = &c * &content_in(f, &self.w).pow(*e);
            }
            g = gcd(&g, &c);
        }
        if g.is_zero() {
            None
        } else {
            Some(g)
        }
    }

    /// Linear factors in `w` of the pieces of the cheapest nonzero product.
    fn candidates(&self, issues: &mut Vec<String>) -> Vec<Poly> {
        let mut options: Vec<Vec<Poly>> = Vec::new();
        for n in &self.nums {
            if !n.is_zero() {
                options.push(vec![n.clone()]);
            }
        }
        if !self.den_zero {
            options.push(self.den.iter().map(|(f, _)| f.clone()).collect());
        }
        let best = options
            .into_iter()
            .min_by_key(|ps| (ps.iter().map(|p| p.degree_in(&self.w)).sum::<u32>(), ps.iter().map(|p| p.len()).sum::<usize>()));
        let mut out: Vec<Poly> = Vec::new();
        let Some(pieces) = best else {
            return out;
        };
        for p in pieces {
            linear_factors(&p, &self.w, &mut out, issues);
        }
        out
    }
}

fn push_unique(out: &mut Vec<Poly>, l: Poly) {
    let l = l.monic();
    if !out.contains(&l) {
        out.push(l);
    }
}

fn linear_factors(p: &Poly, w: &Var, out: &mut Vec<Poly>, issues: &mut Vec<String>) {
    if p.is_zero() || p.degree_in(w) == 0 {
        return;
    }
    let wp = Poly::var(w.clone());
    let mut p = p.clone();
    let k = p.min_degree_in(w);
    if k > 0 {
        push_unique(out, wp.clone());
        p = p.exact_div(&wp.pow(k)).unwrap();
    }
    if p.degree_in(w) == 0 {
        return;
    }
    p = primpart_in(&p, w);
    p = squarefree_in(&p, w);
    for l in out.clone() {
        while p.degree_in(w) > 0 {
            match p.exact_div(&l) {
                Some(q) => p = q,
                None => break,
            }
        }
    }
    match p.degree_in(w) {
        0 => {}
        1 => push_unique(out, p),
        _ if p.vars().len() == 1 => {
            for r in rational_roots(&p, w) {
                let l = &wp - &Poly::constant(r);
                p = p.exact_div(&l).unwrap();
                push_unique(out, l);
            }
            if p.degree_in(w) > 0 {
                issues.push(format!(
                    "irreducible factor {} of degree {}",
                    fmt_poly(&p, &VarNames::new("w", "w")),
                    p.degree_in(w)
                ));
            }
        }
        d => issues.push(format!(
            "factor {} of degree {} with non-constant coefficients",
            fmt_poly(&p, &VarNames::new("w", "w")),
            d
        )),
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a univariate polynomial with nonzero constant term.
fn rational_roots(p: &Poly, w: &Var) -> Vec<Q> {
    let p = p.primitive_int();
    let cs: Vec<Q> = p.coeffs_in(w).iter().map(|c| c.as_constant().unwrap_or_else(Q::zero)).collect();
    let a0 = cs[0].numer().clone();
    let an = cs.last().unwrap().numer().clone();
    let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
        return Vec::new();
    };
    let mut roots = Vec::new();
    for pn in &ps {
        for qd in &qs {
            if !pn.gcd(qd).is_one() {
                continue;
            }
            for s in [1i32, -1] {
                let r = Q::new(pn * BigInt::from(s), qd.clone());
                let val = cs.iter().rev().fold(Q::zero(), |acc, c| acc * &r + c);
                if val.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

#[derive(Clone, Debug)]
enum Found {
    Origin,
    /// `(0, b)` in the u-child; `c = 1/b` when that is polynomial too.
    Finite(Poly, Option<Poly>),
    /// `(c, 0)` in the U-child only.
    BigUOnly(Poly),
    BigUOrigin,
}

fn classify(l: &Poly, w: &Var, issues: &mut Vec<String>) -> Option<Found> {
    let c1 = l.coeff_of(w, 1);
    let c0 = l.coeff_of(w, 0);
    if c0.is_zero() {
        return Some(Found::Origin);
    }
    match (c1.as_constant(), c0.as_constant()) {
        (Some(k1), Some(k0)) => Some(Found::Finite(Poly::constant(-(k0.clone() / k1.clone())), Some(Poly::constant(-(k1 / k0))))),
        (Some(k1), None) => Some(Found::Finite(c0.scale(&-(Q::one() / k1)), None)),
        (None, Some(k0)) => Some(Found::BigUOnly(c1.scale(&-(Q::one() / k0)))),
        (None, None) => {
            issues.push(format!("point {} = 0 is not polynomial in either chart", fmt_poly(l, &VarNames::new("w", "w"))));
            None
        }
    }
}

/// Points on the line `evar = 0` of `lo` (coordinate along the line is the
/// other variable) plus the origin of `hi`, which sees the remaining point.
fn scan(lo: &Chart, hi: &Chart, issues: &mut Vec<String>) -> (Option<Poly>, Vec<Found>) {
    let evar = lo.kind.exceptional_var();
    let data = LineData::new(&lo.field, &evar);
    let cond = data.condition();
    let cond = match cond {
        None => {
            issues.push("the whole exceptional curve is indeterminate".into());
            return (None, Vec::new());
        }
        Some(c) if !c.is_constant() => return (Some(c), Vec::new()),
        Some(_) => None,
    };
    let mut found = Vec::new();
    for l in data.candidates(issues) {
        if data.accepts(&l) {
            if let Some(f) = classify(&l, &data.w, issues) {
                found.push(f);
            }
        }
    }
    let hdata = LineData::new(&hi.field, &hi.kind.exceptional_var());
    if hdata.accepts(&Poly::var(hdata.w.clone())) {
        found.push(Found::BigUOrigin);
    }
    found.sort_by(|a, b| {
        let rank = |f: &Found| match f {
            Found::Origin => (0, None),
            Found::Finite(b, _) => (1, Some(b.clone())),
            Found::BigUOnly(c) => (2, Some(c.clone())),
            Found::BigUOrigin => (3, None),
        };
        rank(a).cmp(&rank(b))
    });
    (cond, found)
}

fn run_cascade(ctx: &Ctx, seed: Pending) -> Result<Local, FieldError> {
    let mut loc = Local { charts: Vec::new(), blowups: Vec::new(), status: CascadeStatus::Regular, leaves: Vec::new() };
    let mut conditions: Vec<Poly> = Vec::new();
    let mut issues: Vec<String> = Vec::new();
    let mut frontier = Vec::new();
    let mut stack = vec![seed];
    while let Some(p) = stack.pop() {
        if p.depth >= ctx.max_depth {
            frontier.push((p.chart, p.a, p.b));
            continue;
        }
        let k = loc.blowups.len() + 1;
        let ch = loc.get(ctx, p.chart);
        let on_curves: Vec<Curve> =
            ch.curves.iter().filter(|(_, eq)| at_point(eq, &p.a, &p.b, ctx.rules).is_zero()).map(|(c, _)| c.clone()).collect();
        let cu = loc.make_child(ctx, p.chart, ChartKind::UChild, &p.a, &p.b, k)?;
        let cbig = loc.make_child(ctx, p.chart, ChartKind::BigUChild, &p.a, &p.b, k)?;
        loc.blowups.push(Blowup {
            index: k,
            cascade: 0,
            chart: p.chart,
            center: (p.a.clone(), p.b.clone()),
            on_curves,
            children: (cu, cbig),
        });
        let mut local_issues = Vec::new();
        let (cond, found) = scan(loc.get(ctx, cu), loc.get(ctx, cbig), &mut local_issues);
        if let Some(c) = cond {
            conditions.push(c.primitive_int());
            continue;
        }
        if found.is_empty() {
            if local_issues.is_empty() {
                loc.leaves.push(cu);
                loc.leaves.push(cbig);
            }
            issues.extend(local_issues);
            continue;
        }
        issues.extend(local_issues);
        let mut next = Vec::new();
        for f in found {
            let step = |chart, a, b, orient, flipped| Pending { chart, a, b, orient, flipped, depth: p.depth + 1 };
            let z = Poly::zero();
            next.push(match f {
                Found::Origin => step(cu, z.clone(), z, Orient::U, p.flipped),
                Found::Finite(b, None) => step(cu, z, b, Orient::U, p.flipped),
                Found::Finite(b, Some(c)) => {
                    if ctx.policy == ChartPolicy::Tilde && p.orient == Orient::BigU && !p.flipped {
                        let t = loc.make_child(ctx, p.chart, ChartKind::Tilde, &p.a, &p.b, k)?;
                        step(t, z, c, Orient::U, true)
                    } else if p.orient == Orient::BigU {
                        step(cbig, c, z, Orient::BigU, p.flipped)
                    } else {
                        step(cu, z, b, Orient::U, p.flipped)
                    }
                }
                Found::BigUOnly(c) => step(cbig, c, z, Orient::BigU, p.flipped),
                Found::BigUOrigin => step(cbig, z.clone(), z, Orient::BigU, p.flipped),
            });
        }
        stack.extend(next.into_iter().rev());
    }
    loc.status = if !conditions.is_empty() || (!issues.is_empty() && loc.leaves.is_empty() && frontier.is_empty()) {
        conditions.sort();
        conditions.dedup();
        CascadeStatus::Obstructed { conditions, issues }
    } else if !frontier.is_empty() {
        CascadeStatus::DepthExceeded { frontier }
    } else if !issues.is_empty() {
        CascadeStatus::Obstructed { conditions, issues }
    } else {
        CascadeStatus::Regular
    };
    Ok(loc)
}

fn seeds(u0: &Chart, big: &Chart, line_issues: &mut Vec<String>) -> Vec<Pending> {
    let (cond, found) = scan(u0, big, line_issues);
    if let Some(c) = cond {
        line_issues.push(format!("condition {} = 0 on the line at infinity", fmt_poly(&c, &VarNames::default())));
        return Vec::new();
    }
    let seed = |chart, a, b, orient| Pending { chart, a, b, orient, flipped: false, depth: 0 };
    found
        .into_iter()
        .map(|f| match f {
            Found::Origin => seed(1, Poly::zero(), Poly::zero(), Orient::U),
            Found::Finite(b, _) => seed(1, Poly::zero(), b, Orient::U),
            Found::BigUOnly(c) => seed(2, c, Poly::zero(), Orient::BigU),
            Found::BigUOrigin => seed(2, Poly::zero(), Poly::zero(), Orient::BigU),
        })
        .collect()
}

fn relabel(c: &mut Chart, n: usize) {
    let (a, b) = c.kind.prefix();
    c.label = format!("{a}{n}");
    c.names = VarNames::new(&format!("{a}{n}"), &format!("{b}{n}"));
}

fn shift_curve(c: &mut Curve, off: usize) {
    if let Curve::Exc(k) = c {
        *k += off;
    }
}

pub fn regularize(s: &PlanarSystem, opts: &Options) -> Result<BlowupTree, BlowupError> {
    let policy = opts.policy.unwrap_or(s.policy);
    let root = root_chart(s);
    let (u0, big0) = compactify(s)?;
    let mut line_issues = Vec::new();
    let seeds = seeds(&u0, &big0, &mut line_issues);
    let roots = vec![root, u0, big0];
    let ctx = Ctx { rules: &s.rules, policy, max_depth: opts.max_depth, roots: &roots };
    let locals = par::map(opts.exec, &seeds, |p| run_cascade(&ctx, p.clone()));
    let mut charts = roots.clone();
    let mut blowups: Vec<Blowup> = Vec::new();
    let mut cascades = Vec::new();
    for (ci, loc) in locals.into_iter().enumerate() {
        let loc = loc?;
        let b_off = blowups.len();
        let c_off = charts.len() - LOCAL_BASE;
        let fix = |id: usize| if id < LOCAL_BASE { id } else { id + c_off };
        for mut c in loc.charts {
            c.id = fix(c.id);
            c.parent = c.parent.map(fix);
            c.created_by = c.created_by.map(|k| k + b_off);
            for (cv, _) in c.curves.iter_mut() {
                shift_curve(cv, b_off);
            }
            let k = c.created_by.unwrap();
            relabel(&mut c, k - ci);
            charts.push(c);
        }
        let mut ids = Vec::new();
        for mut b in loc.blowups {
            b.index += b_off;
            b.cascade = ci;
            b.chart = fix(b.chart);
            b.children = (fix(b.children.0), fix(b.children.1));
            for cv in b.on_curves.iter_mut() {
                shift_curve(cv, b_off);
            }
            ids.push(b.index);
            blowups.push(b);
        }
        let status = match loc.status {
            CascadeStatus::DepthExceeded { frontier } => {
                CascadeStatus::DepthExceeded { frontier: frontier.into_iter().map(|(i, a, b)| (fix(i), a, b)).collect() }
            }
            s => s,
        };
        cascades.push(Cascade { blowups: ids, status, leaves: loc.leaves.into_iter().map(fix).collect() });
    }
    Ok(BlowupTree { system: s.clone(), charts, blowups, cascades, line_issues })
}

/// Conditions on the free coefficient functions under which the cascades of
/// `s` stay regular, found by regularising with the rules for `free` removed.
pub fn extract_conditions(s: &PlanarSystem, free: &[String], opts: &Options) -> Result<Vec<Poly>, BlowupError> {
    let t = regularize(&s.free(free), opts)?;
    Ok(t.conditions())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_roots_found() {
        let p = crate::expr::poly("2 v^2 - 3 v - 2");
        let r = rational_roots(&p, &Var::V);
        assert_eq!(r, vec![Q::new((-1).into(), 2.into()), Q::from_integer(2.into())]);
    }

    #[test]
    fn compactified_p1_has_a_single_seed() {
        let s = PlanarSystem::parse("vars y z\ny' = z\nz' = 6 y^2 + x").unwrap();
        let (u0, big) = compactify(&s).unwrap();
        let mut issues = Vec::new();
        let sd = seeds(&u0, &big, &mut issues);
        assert!(issues.is_empty());
        assert_eq!(sd.len(), 1);
        assert_eq!(sd[0].chart, 1);
    }
}
