//! The d-cluster-free families S and L1 to L5, their closed-form sizes, and numeric
//! evaluation of the surrounding bounds.
//!
//! Every construction uses the same layout on `[n]`: the apex `y = 1`, the blocks
//! `C_i = {2 + (i-1)k, ..., 1 + ik}` for `i = 1..ν`, and the rest `W`. The base family S is
//! the star at `y` over `W` plus the blocks.

use crate::bits::{binom, MAX_VERTICES};
use crate::error::{param, Error, Result};
use crate::family::{is_d_cluster_free, matching_number, SetFamily};
use crate::multigraph::{is_pattern_free, ForbiddenPattern, Multigraph};
use crate::search::{compute_g_exact, turan_multigraph, turan_tight_path, SearchConfig, Value};
use itertools::Itertools;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub n: u32,
    pub k: u32,
    pub nu: u32,
    /// Cluster size; only L5 reads it.
    pub d: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    pub y: u32,
    pub blocks: Vec<Vec<u32>>,
    pub w: Vec<u32>,
}

impl Layout {
    /// `c_j^i`: the j-th vertex of block `i` (both 1-based).
    pub fn c(&self, j: u32, i: u32) -> u32 {
        self.blocks[i as usize - 1][j as usize - 1]
    }
}

impl ConstructionParams {
    pub fn new(n: u32, k: u32, nu: u32) -> Self {
        ConstructionParams { n, k, nu, d: None }
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    /// `|W| = n - kν - 1`.
    pub fn w_size(&self) -> u32 {
        self.n - self.k * self.nu - 1
    }

    /// Requires `n >= kν + k`, so that `W` holds a (k-1)-set.
    pub fn layout(&self) -> Result<Layout> {
        let (n, k, nu) = (self.n, self.k, self.nu);
        if k == 0 {
            return param("k must be at least 1");
        }
        if n > MAX_VERTICES {
            return param(format!("n = {n} exceeds {MAX_VERTICES}"));
        }
        if u64::from(n) < u64::from(k) * (u64::from(nu) + 1) {
            return param(format!("layout needs n >= k(ν+1) = {}", u64::from(k) * (u64::from(nu) + 1)));
        }
        let blocks = (1..=nu).map(|i| (2 + (i - 1) * k..=1 + i * k).collect()).collect();
        Ok(Layout { y: 1, blocks, w: (k * nu + 2..=n).collect() })
    }
}

fn c(n: u32, k: i64) -> u128 {
    binom(i64::from(n), k)
}

/// `|S| = C(n-kν-1, k-1) + ν`
pub fn size_s(n: u32, k: u32, nu: u32) -> u128 {
    c(n - k * nu - 1, i64::from(k) - 1) + u128::from(nu)
}

pub fn size_l1(n: u32, k: u32, nu: u32) -> u128 {
    let w = n - k * nu - 1;
    let k = i64::from(k);
    let extra: u128 = (2..k)
        .map(|i| u128::from(nu / 2) * binom(2 * k - 2, i - 2) * c(w, k - 1 - i))
        .sum();
    size_s(n, k as u32, nu) + extra
}

/// `ex_nu` is `ex(ν, P_2^3)`.
pub fn size_l2(n: u32, k: u32, nu: u32, ex_nu: u64) -> u128 {
    let w = n - k * nu - 1;
    let ki = i64::from(k);
    size_s(n, k, nu) + u128::from(nu / 2) * c(w, ki - 3) + u128::from(k - 1) * u128::from(ex_nu) * c(w, ki - 4)
}

/// `ex_w` is the edge count of the inner P_2^{k-2}-free graph on `W` (ν = 1).
pub fn size_l3(n: u32, k: u32, ex_w: u64) -> u128 {
    c(n - k - 1, i64::from(k) - 1) + u128::from(ex_w) + 1
}

pub fn size_l4(n: u32, k: u32, nu: u32) -> u128 {
    let w = n - k * nu - 1;
    let cross = u128::from(nu / 2) * u128::from(nu - nu / 2);
    size_s(n, k, nu) + u128::from(k) * cross * c(w, i64::from(k) - 3)
}

/// `edges` is the edge count, with multiplicity, of the inner (k-2)-multigraph on `W`.
pub fn size_l5(n: u32, k: u32, nu: u32, edges: u64) -> u128 {
    size_s(n, k, nu) + u128::from(nu) * u128::from(edges)
}

/// Star over `W` at `y`, plus the blocks, plus `{y} ∪ A ∪ B` for every `A` in `heads` and
/// every `(k - 1 - |A|)`-subset `B` of `W`.
fn assemble(p: &ConstructionParams, lay: &Layout, heads: &[Vec<u32>]) -> Result<SetFamily> {
    let k = p.k as usize;
    let mut members: Vec<Vec<u32>> = lay.blocks.clone();
    for a in lay.w.iter().copied().combinations(k - 1) {
        members.push([vec![lay.y], a].concat());
    }
    for head in heads {
        if head.len() + 1 > k {
            continue;
        }
        for b in lay.w.iter().copied().combinations(k - 1 - head.len()) {
            members.push([vec![lay.y], head.clone(), b].concat());
        }
    }
    SetFamily::new(p.n, p.k, members)
}

pub fn construct_s(p: &ConstructionParams) -> Result<SetFamily> {
    let lay = p.layout()?;
    assemble(p, &lay, &[])
}

fn need_k(p: &ConstructionParams, min: u32, name: &str) -> Result<()> {
    if p.k < min {
        return param(format!("{name} needs k >= {min}"));
    }
    Ok(())
}

/// S plus `{y} ∪ A ∪ B` where `A` runs over the i-subsets (2 <= i <= k-1) of a block pair
/// `C_{2l-1} ∪ C_{2l}` containing both first vertices, and `B` over the (k-1-i)-subsets
/// of `W`. With ν = 1 this is S.
pub fn construct_l1(p: &ConstructionParams) -> Result<SetFamily> {
    need_k(p, 3, "L1")?;
    let lay = p.layout()?;
    let mut heads = Vec::new();
    for l in 1..=p.nu / 2 {
        let (a, b) = (lay.c(1, 2 * l - 1), lay.c(1, 2 * l));
        let rest: Vec<u32> = [&lay.blocks[2 * l as usize - 2][1..], &lay.blocks[2 * l as usize - 1][1..]].concat();
        for i in 2..p.k {
            for extra in rest.iter().copied().combinations(i as usize - 2) {
                heads.push([vec![a, b], extra].concat());
            }
        }
    }
    assemble(p, &lay, &heads)
}

/// A maximum P_2^3-free 3-graph on `[ν]`.
fn inner_tight_path_free(n: u32, r: u32, config: &SearchConfig) -> Result<Multigraph> {
    let res = turan_tight_path(n, r, 2, config)?;
    if !res.is_proven() {
        return Err(Error::Budget { budget: config.budget });
    }
    Ok(res.witness.and_then(|w| w.as_multigraph().cloned()).expect("tight-path search returns a graph"))
}

/// S plus `{y} ∪ {c_1^{2i-1}, c_1^{2i}} ∪ B` with `B` a (k-3)-subset of `W`, plus, for every
/// position `j = 2..k`, a maximum P_2^3-free 3-graph on `{c_j^1, ..., c_j^ν}` extended by
/// (k-4)-subsets of `W`. For k = 3 the second layer is empty.
pub fn construct_l2(p: &ConstructionParams, config: &SearchConfig) -> Result<SetFamily> {
    need_k(p, 3, "L2")?;
    let lay = p.layout()?;
    let inner = if p.nu >= 3 { Some(inner_tight_path_free(p.nu, 3, config)?) } else { None };
    let mut heads = Vec::new();
    for i in 1..=p.nu / 2 {
        heads.push(vec![lay.c(1, 2 * i - 1), lay.c(1, 2 * i)]);
    }
    if let Some(g) = &inner {
        for j in 2..=p.k {
            for (e, _) in g.edges() {
                heads.push(e.iter().map(|&i| lay.c(j, i)).collect());
            }
        }
    }
    assemble(p, &lay, &heads)
}

/// `ex(ν, P_2^3)`, by exact search.
pub fn ex_tight_path_3(nu: u32, config: &SearchConfig) -> Result<u64> {
    if nu < 3 {
        return Ok(0);
    }
    Ok(inner_tight_path_free(nu, 3, config)?.edge_count())
}

/// The inner graph of L3: a maximum (k-2)-graph on `[n']` with every (k-3)-set in at most
/// one edge. For k = 4 this is a maximum matching; otherwise it comes from exact search.
pub fn l3_inner(n_prime: u32, k: u32, config: &SearchConfig) -> Result<Multigraph> {
    if k < 4 {
        return param("L3 needs k >= 4");
    }
    if k == 4 {
        return Multigraph::from_edges(n_prime, 2, (1..=n_prime / 2).map(|i| [2 * i - 1, 2 * i]));
    }
    inner_tight_path_free(n_prime, k - 2, config)
}

/// ν = 1 only: S plus `{y, v} ∪ A` for the edges `A` of a maximum P_2^{k-2}-free
/// (k-2)-graph on `W`, where `v` is the first vertex of `C_1`.
pub fn construct_l3(p: &ConstructionParams, config: &SearchConfig) -> Result<SetFamily> {
    if p.nu != 1 {
        return param("L3 needs ν = 1");
    }
    need_k(p, 4, "L3")?;
    p.layout()?;
    let inner = l3_inner(p.w_size(), p.k, config)?;
    construct_l3_from(p, &inner)
}

/// L3 with a caller-supplied inner graph on `[n - k - 1]`, mapped onto `W` in order.
pub fn construct_l3_from(p: &ConstructionParams, inner: &Multigraph) -> Result<SetFamily> {
    if p.nu != 1 {
        return param("L3 needs ν = 1");
    }
    need_k(p, 4, "L3")?;
    let lay = p.layout()?;
    if inner.n() != p.w_size() || inner.r() != p.k - 2 || !inner.is_simple() {
        return param("L3 needs a simple (k-2)-graph on n - k - 1 vertices");
    }
    let v = lay.c(1, 1);
    let heads: Vec<Vec<u32>> = inner
        .edges()
        .map(|(e, _)| [vec![v], e.iter().map(|&x| lay.w[x as usize - 1]).collect()].concat())
        .collect();
    assemble(p, &lay, &heads)
}

/// ν >= 2: S plus `{y, c_m^i, c_m^j} ∪ B` for `i <= ⌊ν/2⌋ < j`, every position `m`, and every
/// (k-3)-subset `B` of `W`.
pub fn construct_l4(p: &ConstructionParams) -> Result<SetFamily> {
    if p.nu < 2 {
        return param("L4 needs ν >= 2");
    }
    need_k(p, 3, "L4")?;
    let lay = p.layout()?;
    let half = p.nu / 2;
    let mut heads = Vec::new();
    for i in 1..=half {
        for j in half + 1..=p.nu {
            for m in 1..=p.k {
                heads.push(vec![lay.c(m, i), lay.c(m, j)]);
            }
        }
    }
    assemble(p, &lay, &heads)
}

/// S plus, for every edge `E` of multiplicity `l` in `inner` (a (k-2)-multigraph on
/// `[n - kν - 1]`, mapped onto `W` in order) and every block `i`, the sets
/// `{y, c_m^i} ∪ E` for `m = 1..l`. `inner` must be free of k-1 vertices spanning d-2 edges.
pub fn construct_l5(p: &ConstructionParams, inner: &Multigraph) -> Result<SetFamily> {
    let Some(d) = p.d else { return param("L5 needs d") };
    if d < 5 {
        return param("L5 needs d >= 5");
    }
    need_k(p, 3, "L5")?;
    let lay = p.layout()?;
    if inner.n() != p.w_size() || inner.r() != p.k - 2 {
        return param(format!("L5 needs a {}-multigraph on {} vertices", p.k - 2, p.w_size()));
    }
    if let Some(l) = inner.edges().map(|(_, m)| m).find(|&m| m > u64::from(p.k)) {
        return Err(Error::ConstructionUndefined(format!("multiplicity {l} exceeds the block size k = {}", p.k)));
    }
    let pattern = ForbiddenPattern::multigraph(p.k - 1, d as u64 - 2, p.k - 2)?;
    if !is_pattern_free(inner, &pattern)?.is_free() {
        return param(format!("inner multigraph has k-1 vertices spanning {} edges", d - 2));
    }
    let mut heads = Vec::new();
    for (e, l) in inner.edges() {
        let e: Vec<u32> = e.iter().map(|&x| lay.w[x as usize - 1]).collect();
        for i in 1..=p.nu {
            for m in 1..=l as u32 {
                heads.push([vec![lay.c(m, i)], e.clone()].concat());
            }
        }
    }
    assemble(p, &lay, &heads)
}

/// An exact rational, written as an integer when it is one and as `"a/b"` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: u128,
    pub den: u128,
}

impl Ratio {
    pub fn int(v: u128) -> Self {
        Ratio { num: v, den: 1 }
    }

    pub fn new(num: u128, den: u128) -> Self {
        let g = gcd(num, den).max(1);
        Ratio { num: num / g, den: den / g }
    }

    pub fn plus(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    pub fn mul_int(self, m: u128) -> Ratio {
        Ratio::new(self.num * m, self.den)
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl std::fmt::Display for Ratio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match u64::try_from(self.num) {
            Ok(v) if self.den == 1 => s.serialize_u64(v),
            _ => s.serialize_str(&self.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedConstant {
    pub symbol: String,
    pub value: Option<Ratio>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl NamedConstant {
    fn known(symbol: &str, value: Ratio) -> Self {
        NamedConstant { symbol: symbol.into(), value: Some(value), note: None }
    }

    fn unknown(symbol: &str, note: impl Into<String>) -> Self {
        NamedConstant { symbol: symbol.into(), value: None, note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructionSize {
    pub name: String,
    pub size: u64,
    pub formula: Ratio,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundExpression {
    pub value: Option<Ratio>,
    /// The expression holds only for sufficiently large `n`; its `o(1)` term is set to 0.
    pub asymptotic: bool,
    pub expression: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n: u32,
    pub k: u32,
    pub d: usize,
    pub nu: u32,
    /// Size of the largest generated family that passed the cluster and matching checks.
    pub lower_bound_value: u64,
    pub lower_bound_construction: String,
    pub constructions: Vec<ConstructionSize>,
    pub lower_bound_expression: BoundExpression,
    pub upper_bound_expression: BoundExpression,
    pub constants: Vec<NamedConstant>,
}

fn verified(name: &str, family: SetFamily, d: usize, nu: u32, formula: u128) -> Result<ConstructionSize> {
    if family.len() as u128 != formula {
        return Err(Error::Verification(format!("{name} has {} members, formula gives {formula}", family.len())));
    }
    if !is_d_cluster_free(&family, d) {
        return Err(Error::Verification(format!("{name} contains a {d}-cluster")));
    }
    let (m, _) = matching_number(&family)?;
    if m != nu as usize + 1 {
        return Err(Error::Verification(format!("{name} has matching number {m}, expected {}", nu + 1)));
    }
    Ok(ConstructionSize { name: name.into(), size: family.len() as u64, formula: Ratio::int(formula) })
}

/// Evaluates the lower and upper bound expressions for `f(n,k,d,ν)` and builds the
/// applicable constructions, each verified before it counts as a lower bound.
pub fn bound_report(n: u32, k: u32, d: usize, nu: u32, config: &SearchConfig) -> Result<BoundReport> {
    if d < 3 || d > k as usize {
        return param(format!("report needs 3 <= d <= k, got d = {d}, k = {k}"));
    }
    let p = ConstructionParams::new(n, k, nu).with_d(d);
    p.layout()?;
    let w = p.w_size();
    let ki = i64::from(k);
    let cw = |j: i64| c(w, j);
    let half = u128::from(nu / 2);
    let nu128 = u128::from(nu);

    let mut built = vec![verified("S", construct_s(&p)?, d, nu, size_s(n, k, nu))?];
    let mut constants = Vec::new();
    let m_d = m_d_constant(k, d, nu, config)?;

    let (lower, upper) = match d {
        3 => {
            let ex_nu = ex_tight_path_3(nu, config)?;
            built.push(verified("L1", construct_l1(&p)?, d, nu, size_l1(n, k, nu))?);
            built.push(verified("L2", construct_l2(&p, config)?, d, nu, size_l2(n, k, nu, ex_nu))?);
            let c1 = (u128::from(k - 1) * u128::from(ex_nu)).max(2 * u128::from(k - 1) * half);
            let c2 = Ratio::new(u128::from(k) * binom(i64::from(nu), 2), 3).plus(Ratio::int(u128::from(k - 1) * nu128));
            constants.push(NamedConstant::known("c1_lower", Ratio::int(c1)));
            constants.push(NamedConstant::known("c2_upper", c2));
            constants.push(NamedConstant::known("ex(nu,P_2^3)", Ratio::int(u128::from(ex_nu))));
            let base = Ratio::int(cw(ki - 1) + half * cw(ki - 3));
            let lower = BoundExpression {
                value: Some(base.plus(Ratio::int(c1 * cw(ki - 4) + nu128))),
                asymptotic: false,
                expression: "C(n-k*nu-1,k-1) + floor(nu/2)*C(n-k*nu-1,k-3) + c1_lower*C(n-k*nu-1,k-4) + nu".into(),
                note: None,
            };
            let upper = BoundExpression {
                value: m_d.value.map(|m| base.plus(c2.mul_int(cw(ki - 4))).plus(m)),
                asymptotic: true,
                expression: "C(n-k*nu-1,k-1) + floor(nu/2)*C(n-k*nu-1,k-3) + (c2_upper + o(1))*C(n-k*nu-1,k-4) + M_3".into(),
                note: m_d.value.is_none().then(|| "needs M_3".to_string()),
            };
            if nu == 1 {
                constants.push(NamedConstant {
                    symbol: "f(n,k,3,1)".into(),
                    value: Some(Ratio::int(c(n - k - 1, ki - 1) + 1)),
                    note: Some("exact value for sufficiently large n".into()),
                });
            }
            (lower, upper)
        }
        4 => {
            let cprime = u128::from(k) * u128::from(nu * nu / 4);
            constants.push(NamedConstant::known("c'_lower", Ratio::int(cprime)));
            let mut lower = BoundExpression {
                value: Some(Ratio::int(cw(ki - 1) + cprime * cw(ki - 3))),
                asymptotic: true,
                expression: "C(n-k*nu-1,k-1) + c'_lower*C(n-k*nu-1,k-3)".into(),
                note: None,
            };
            if nu == 1 {
                let inner = l3_inner(w, k, config)?;
                let ex = inner.edge_count();
                built.push(verified("L3", construct_l3_from(&p, &inner)?, d, nu, size_l3(n, k, ex))?);
                constants.push(NamedConstant::known("ex(n',P_2^(k-2))", Ratio::int(u128::from(ex))));
                lower = BoundExpression {
                    value: Some(Ratio::int(size_l3(n, k, ex))),
                    asymptotic: false,
                    expression: "C(n-k-1,k-1) + ex(n-k-1,P_2^(k-2)) + 1".into(),
                    note: None,
                };
            } else {
                built.push(verified("L4", construct_l4(&p)?, d, nu, size_l4(n, k, nu))?);
            }
            let upper = BoundExpression {
                value: None,
                asymptotic: true,
                expression: "C(n-k*nu-1,k-1) + c'_2*C(n-k*nu-1,k-3)".into(),
                note: Some("c'_2 is not determined".into()),
            };
            (lower, upper)
        }
        _ => {
            let pattern = ForbiddenPattern::multigraph(k - 1, d as u64 - 2, k - 2)?;
            let res = turan_multigraph(w, &pattern, config)?;
            let proven = res.is_proven();
            let inner = res.witness.and_then(|x| x.as_multigraph().cloned()).expect("Turán search returns a graph");
            let ex = inner.edge_count();
            built.push(verified("L5", construct_l5(&p, &inner)?, d, nu, size_l5(n, k, nu, ex))?);
            constants.push(NamedConstant {
                symbol: "EX^(k-2)(n',H_(k-1)^(d-2))".into(),
                value: proven.then(|| Ratio::int(u128::from(ex))),
                note: (!proven).then(|| format!("search budget exhausted; at least {ex}")),
            });
            let lower = BoundExpression {
                value: proven.then(|| Ratio::int(size_l5(n, k, nu, ex))),
                asymptotic: false,
                expression: "C(n-k*nu-1,k-1) + nu*EX^(k-2)(n-k*nu-1,H_(k-1)^(d-2)) + nu".into(),
                note: None,
            };
            let upper = BoundExpression {
                value: proven.then(|| Ratio::int(cw(ki - 1) + nu128 * u128::from(ex))),
                asymptotic: true,
                expression: "C(n-k*nu-1,k-1) + (nu + o(1))*EX^(k-2)(n-k*nu-1,H_(k-1)^(d-2))".into(),
                note: None,
            };
            (lower, upper)
        }
    };
    constants.push(m_d);
    let best = built.iter().max_by_key(|b| b.size).expect("S is always built");
    Ok(BoundReport {
        n,
        k,
        d,
        nu,
        lower_bound_value: best.size,
        lower_bound_construction: best.name.clone(),
        constructions: built.clone(),
        lower_bound_expression: lower,
        upper_bound_expression: upper,
        constants,
    })
}

/// `M_d = g(kν, k, d, ν-1)`, only defined here for ν >= 3.
fn m_d_constant(k: u32, d: usize, nu: u32, config: &SearchConfig) -> Result<NamedConstant> {
    let symbol = format!("M_{d}");
    if nu < 3 {
        return Ok(NamedConstant::unknown(&symbol, "not computed: needs ν-1 >= 2"));
    }
    if u64::from(k) * u64::from(nu) > u64::from(MAX_VERTICES) {
        return Ok(NamedConstant::unknown(&symbol, "not computed: kν too large"));
    }
    let res = compute_g_exact(k * nu, k, d, nu as usize - 1, config)?;
    Ok(match res.value {
        Value::Finite(v) if res.is_proven() => NamedConstant::known(&symbol, Ratio::int(u128::from(v))),
        Value::Finite(v) => NamedConstant::unknown(&symbol, format!("not computed: search budget exhausted, at least {v}")),
        _ => NamedConstant::known(&symbol, Ratio::int(0)),
    })
}

/// Number of vertices outside the apex and the blocks; `None` when the layout does not fit.
pub fn w_size(n: u32, k: u32, nu: u32) -> Option<u32> {
    ConstructionParams::new(n, k, nu).layout().ok().map(|l| l.w.len() as u32)
}
