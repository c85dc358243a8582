//! State catalog: the named families used in the examples plus seeded
//! random samplers.
//!
//! Random sampling uses `ChaCha8Rng::seed_from_u64(seed)` from `rand_chacha`
//! so a `(family, params, seed)` triple identifies a state on every platform.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::bipartite::{validate, BipartiteState};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub type StateRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn max_mixed(d: usize) -> Result<BipartiteState> {
    if d == 0 {
        return Err(Error::param("d", 0.0, "dimension must be at least 1"));
    }
    let dd = d * d;
    validate(
        ComplexMatrix::identity(dd).scale_real(1.0 / dd as f64),
        d,
        d,
    )
}

fn max_entangled_ket(d: usize) -> Vec<C64> {
    let mut v = vec![re(0.0); d * d];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = re(amp);
    }
    v
}

/// `(1/d) sum_ij |ii><jj|`
pub fn max_entangled(d: usize) -> Result<BipartiteState> {
    if d == 0 {
        return Err(Error::param("d", 0.0, "dimension must be at least 1"));
    }
    validate(ComplexMatrix::outer(&max_entangled_ket(d)), d, d)
}

/// Bell basis kets in the order `Phi+`, `Phi-`, `Psi+`, `Psi-`.
pub fn bell_kets() -> [[C64; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    let z = 0.0;
    [
        [re(h), re(z), re(z), re(h)],
        [re(h), re(z), re(z), re(-h)],
        [re(z), re(h), re(h), re(z)],
        [re(z), re(h), re(-h), re(z)],
    ]
}

/// Mixture of Bell projectors with weights on `Phi+`, `Phi-`, `Psi+`, `Psi-`.
pub fn bell_diagonal(weights: [f64; 4]) -> Result<BipartiteState> {
    for (k, &w) in weights.iter().enumerate() {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::param(
                &format!("w{}", k + 1),
                w,
                "weights must lie in [0, 1]",
            ));
        }
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::param("w1+w2+w3+w4", total, "weights must sum to 1"));
    }
    let kets = bell_kets();
    let rho = weights
        .iter()
        .zip(&kets)
        .fold(ComplexMatrix::zeros(4, 4), |acc, (&w, k)| {
            &acc + &ComplexMatrix::outer(k).scale_real(w)
        });
    validate(rho, 2, 2)
}

/// Two-qubit Werner state `p |Psi-><Psi-| + (1 - p) I/4`, valid for
/// `-1/3 <= p <= 1` and entangled for `p > 1/3`.
pub fn werner2(p: f64) -> Result<BipartiteState> {
    if !(-1.0 / 3.0 - 1e-15..=1.0).contains(&p) {
        return Err(Error::param(
            "p",
            p,
            "Werner mixing weight must lie in [-1/3, 1]",
        ));
    }
    let singlet = ComplexMatrix::outer(&bell_kets()[3]);
    let rho = &singlet.scale_real(p) + &ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    validate(rho, 2, 2)
}

/// Isotropic state with fidelity `f` to the maximally entangled state:
/// `f P + (1 - f) (I - P) / (d^2 - 1)`. Separable iff `f <= 1/d`.
pub fn isotropic(d: usize, f: f64) -> Result<BipartiteState> {
    if d < 2 {
        return Err(Error::param("d", d as f64, "isotropic states need d >= 2"));
    }
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::param("f", f, "fidelity must lie in [0, 1]"));
    }
    let dd = d * d;
    let proj = ComplexMatrix::outer(&max_entangled_ket(d));
    let rest = &ComplexMatrix::identity(dd) - &proj;
    let rho = &proj.scale_real(f) + &rest.scale_real((1.0 - f) / (dd as f64 - 1.0));
    validate(rho, d, d)
}

/// `(I - sum_i |psi_i><psi_i|) / 4` for a five-member UPB in 3x3.
fn upb_complement(vectors: &[Vec<C64>]) -> Result<BipartiteState> {
    let proj = vectors.iter().fold(ComplexMatrix::zeros(9, 9), |acc, v| {
        &acc + &ComplexMatrix::outer(v)
    });
    validate((&ComplexMatrix::identity(9) - &proj).scale_real(0.25), 3, 3)
}

fn ket3(amps: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::column(&amps.map(re))
}

/// The five "tiles" product vectors.
pub fn tiles_upb_vectors() -> Vec<Vec<C64>> {
    let h = FRAC_1_SQRT_2;
    let third = 1.0 / 3.0f64.sqrt();
    let k0 = ket3([1.0, 0.0, 0.0]);
    let k2 = ket3([0.0, 0.0, 1.0]);
    let k01 = ket3([h, -h, 0.0]);
    let k12 = ket3([0.0, h, -h]);
    let all = ket3([third, third, third]);
    [
        k0.kron(&k01),
        k01.kron(&k2),
        k2.kron(&k12),
        k12.kron(&k0),
        all.kron(&all),
    ]
    .into_iter()
    .map(ComplexMatrix::into_vec)
    .collect()
}

pub fn tiles_upb() -> Result<BipartiteState> {
    upb_complement(&tiles_upb_vectors())
}

/// The five "pyramid" product vectors `v_j (x) v_{2j mod 5}` with
/// `v_j = N (cos(2 pi j/5), sin(2 pi j/5), h)`.
pub fn pyramid_upb_vectors() -> Vec<Vec<C64>> {
    let h = 0.5 * (1.0 + 5.0f64.sqrt()).sqrt();
    let norm = 2.0 / (5.0 + 5.0f64.sqrt()).sqrt();
    let v: Vec<ComplexMatrix> = (0..5)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / 5.0;
            ket3([norm * t.cos(), norm * t.sin(), norm * h])
        })
        .collect();
    (0..5)
        .map(|j| v[j].kron(&v[(2 * j) % 5]).into_vec())
        .collect()
}

pub fn pyramid_upb() -> Result<BipartiteState> {
    upb_complement(&pyramid_upb_vectors())
}

/// Horodecki's 3x3 PPT entangled state, `0 < a < 1`.
pub fn horodecki3x3(a: f64) -> Result<BipartiteState> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::param("a", a, "must lie in the open interval (0, 1)"));
    }
    let mut z = ComplexMatrix::zeros(9, 9);
    for &i in &[0, 4, 8] {
        for &j in &[0, 4, 8] {
            z[(i, j)] = re(a);
        }
    }
    for &i in &[1, 2, 3, 5, 7] {
        z[(i, i)] = re(a);
    }
    let diag = (1.0 + a) / 2.0;
    let off = (1.0 - a * a).sqrt() / 2.0;
    z[(6, 6)] = re(diag);
    z[(8, 8)] = re(diag);
    z[(6, 8)] = re(off);
    z[(8, 6)] = re(off);
    validate(z.scale_real(1.0 / (8.0 * a + 1.0)), 3, 3)
}

/// `p rho_a + (1 - p) I/9`
pub fn horodecki_mix(a: f64, p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", p, "must lie in [0, 1]"));
    }
    let rho = horodecki3x3(a)?;
    let mixed =
        &rho.matrix().scale_real(p) + &ComplexMatrix::identity(9).scale_real((1.0 - p) / 9.0);
    validate(mixed, 3, 3)
}

/// Two-qubit family mixing `a|00> + b|11>` (weight `p`) with `a|01> + b|10>`
/// (weight `1 - p`), `b = sqrt(1 - a^2)`. Separable only for `p = 1/2` or
/// `a` in `{0, 1}`.
pub fn two_by_two_family(a: f64, p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::param("a", a, "must lie in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("p", p, "must lie in [0, 1]"));
    }
    let b = (1.0 - a * a).sqrt();
    let q = 1.0 - p;
    let z = ComplexMatrix::from_real_rows(&[
        &[p * a * a, 0.0, 0.0, p * a * b],
        &[0.0, q * a * a, q * a * b, 0.0],
        &[0.0, q * a * b, q * b * b, 0.0],
        &[p * a * b, 0.0, 0.0, p * b * b],
    ]);
    validate(z, 2, 2)
}

fn gaussian(rng: &mut StateRng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalised complex-Gaussian vector (unitarily invariant distribution).
pub fn random_pure(d: usize, rng: &mut StateRng) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Unitary from Gram-Schmidt QR of a complex Ginibre matrix (positive `R` diagonal).
pub fn random_unitary(d: usize, rng: &mut StateRng) -> ComplexMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, &qq) in v.iter_mut().zip(q) {
                    *x -= qq * proj;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// `G G^H / tr(G G^H)` with `G` a `d x rank` complex Gaussian matrix.
pub fn random_density(d: usize, rank: usize, rng: &mut StateRng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, rank, |_, _| gaussian(rng));
    let ggh = &g * &g.adjoint();
    let tr = ggh.trace().re;
    let rho = ggh.scale_real(1.0 / tr);
    // exact Hermitian symmetry before validation
    ComplexMatrix::from_fn(d, d, |i, j| {
        if i == j {
            re(rho[(i, i)].re)
        } else {
            (rho[(i, j)] + rho[(j, i)].conj()) * 0.5
        }
    })
}

pub fn random_mixed_with(
    m: usize,
    n: usize,
    rank: usize,
    rng: &mut StateRng,
) -> Result<BipartiteState> {
    if m == 0 || n == 0 {
        return Err(Error::Shape(format!(
            "subsystem dimensions must be positive, got ({m}, {n})"
        )));
    }
    if rank == 0 || rank > m * n {
        return Err(Error::param(
            "rank",
            rank as f64,
            format!("must lie in [1, {}]", m * n),
        ));
    }
    validate(random_density(m * n, rank, rng), m, n)
}

pub fn random_mixed(m: usize, n: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    random_mixed_with(m, n, rank, &mut rng_from_seed(seed))
}

#[derive(Debug, Clone)]
pub struct EnsembleTerm {
    pub p: f64,
    pub rho_a: ComplexMatrix,
    pub rho_b: ComplexMatrix,
}

/// Explicit separable decomposition `sum_i p_i rho_a_i (x) rho_b_i`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub terms: Vec<EnsembleTerm>,
}

impl Ensemble {
    pub fn matrix(&self) -> ComplexMatrix {
        let (m, n) = match self.terms.first() {
            Some(t) => (t.rho_a.rows(), t.rho_b.rows()),
            None => return ComplexMatrix::zeros(0, 0),
        };
        self.terms
            .iter()
            .fold(ComplexMatrix::zeros(m * n, m * n), |acc, t| {
                &acc + &t.rho_a.kron(&t.rho_b).scale_real(t.p)
            })
    }
}

pub fn random_separable_with(
    m: usize,
    n: usize,
    terms: usize,
    rng: &mut StateRng,
) -> Result<(BipartiteState, Ensemble)> {
    if m == 0 || n == 0 {
        return Err(Error::Shape(format!(
            "subsystem dimensions must be positive, got ({m}, {n})"
        )));
    }
    if terms == 0 {
        return Err(Error::param("terms", 0.0, "need at least one product term"));
    }
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let terms: Vec<EnsembleTerm> = raw
        .iter()
        .map(|w| EnsembleTerm {
            p: w / total,
            rho_a: ComplexMatrix::outer(&random_pure(m, rng)),
            rho_b: ComplexMatrix::outer(&random_pure(n, rng)),
        })
        .collect();
    let ensemble = Ensemble { terms };
    let state = validate(ensemble.matrix(), m, n)?;
    Ok((state, ensemble))
}

pub fn random_separable(
    m: usize,
    n: usize,
    terms: usize,
    seed: u64,
) -> Result<(BipartiteState, Ensemble)> {
    random_separable_with(m, n, terms, &mut rng_from_seed(seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MaxMixed,
    MaxEntangled,
    BellDiagonal,
    Werner2,
    Isotropic,
    TilesUpb,
    PyramidUpb,
    Horodecki3x3,
    HorodeckiMix,
    TwoByTwoFamily,
    RandomMixed,
    RandomSeparable,
}

impl Family {
    pub const ALL: [Family; 12] = [
        Family::MaxMixed,
        Family::MaxEntangled,
        Family::BellDiagonal,
        Family::Werner2,
        Family::Isotropic,
        Family::TilesUpb,
        Family::PyramidUpb,
        Family::Horodecki3x3,
        Family::HorodeckiMix,
        Family::TwoByTwoFamily,
        Family::RandomMixed,
        Family::RandomSeparable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MaxMixed => "max_mixed",
            Family::MaxEntangled => "max_entangled",
            Family::BellDiagonal => "bell_diagonal",
            Family::Werner2 => "werner2",
            Family::Isotropic => "isotropic",
            Family::TilesUpb => "tiles_upb",
            Family::PyramidUpb => "pyramid_upb",
            Family::Horodecki3x3 => "horodecki3x3",
            Family::HorodeckiMix => "horodecki_mix",
            Family::TwoByTwoFamily => "two_by_two_family",
            Family::RandomMixed => "random_mixed",
            Family::RandomSeparable => "random_separable",
        }
    }

    /// Accepted parameter keys; `true` marks required ones.
    pub fn params(self) -> &'static [(&'static str, bool)] {
        match self {
            Family::MaxMixed | Family::MaxEntangled => &[("d", true)],
            Family::BellDiagonal => &[("w1", true), ("w2", true), ("w3", true), ("w4", true)],
            Family::Werner2 => &[("p", true)],
            Family::Isotropic => &[("d", true), ("f", true)],
            Family::TilesUpb | Family::PyramidUpb => &[],
            Family::Horodecki3x3 => &[("a", true)],
            Family::HorodeckiMix | Family::TwoByTwoFamily => &[("a", true), ("p", true)],
            Family::RandomMixed => &[("m", true), ("n", true), ("rank", false), ("seed", false)],
            Family::RandomSeparable => {
                &[("m", true), ("n", true), ("terms", false), ("seed", false)]
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
                Error::Parse(format!(
                    "unknown state family `{s}` (known: {})",
                    known.join(", ")
                ))
            })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A family name plus `key=value` parameters, e.g. `horodecki3x3 a=0.236`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub family: Family,
    pub params: BTreeMap<String, f64>,
}

impl StateSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// Parses whitespace-separated tokens: the family name followed by `key=value` pairs.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<Self> {
        let (head, rest) = tokens
            .split_first()
            .ok_or_else(|| Error::Parse("empty state specification".into()))?;
        let family: Family = head.as_ref().parse()?;
        let mut spec = StateSpec::new(family);
        for tok in rest {
            let tok = tok.as_ref();
            let (k, v) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got `{tok}`")))?;
            let value: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("`{k}`: `{v}` is not a number")))?;
            if spec.params.insert(k.trim().to_string(), value).is_some() {
                return Err(Error::Parse(format!("parameter `{k}` given twice")));
            }
        }
        spec.check_keys()?;
        Ok(spec)
    }

    fn check_keys(&self) -> Result<()> {
        let allowed = self.family.params();
        for key in self.params.keys() {
            if !allowed.iter().any(|(k, _)| k == key) {
                return Err(Error::Parse(format!(
                    "`{}` does not take parameter `{key}`",
                    self.family
                )));
            }
        }
        for (k, required) in allowed {
            if *required && !self.params.contains_key(*k) {
                return Err(Error::Parse(format!(
                    "`{}` needs parameter `{k}`",
                    self.family
                )));
            }
        }
        Ok(())
    }

    fn real(&self, key: &str) -> Result<f64> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| Error::Parse(format!("`{}` needs parameter `{key}`", self.family)))
    }

    fn int_or(&self, key: &str, default: Option<u64>) -> Result<u64> {
        match (self.params.get(key), default) {
            (Some(&v), _) => {
                if v < 0.0 || v.fract() != 0.0 || v > 9.007_199_254_740_992e15 {
                    Err(Error::param(key, v, "must be a non-negative integer"))
                } else {
                    Ok(v as u64)
                }
            }
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::Parse(format!(
                "`{}` needs parameter `{key}`",
                self.family
            ))),
        }
    }

    fn dim(&self, key: &str) -> Result<usize> {
        let v = self.int_or(key, None)?;
        if v == 0 || v > 16 {
            return Err(Error::param(key, v as f64, "dimension must lie in [1, 16]"));
        }
        Ok(v as usize)
    }

    pub fn build(&self) -> Result<BipartiteState> {
        build(self)
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        StateSpec::from_tokens(&tokens)
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

pub fn build(spec: &StateSpec) -> Result<BipartiteState> {
    spec.check_keys()?;
    match spec.family {
        Family::MaxMixed => max_mixed(spec.dim("d")?),
        Family::MaxEntangled => max_entangled(spec.dim("d")?),
        Family::BellDiagonal => bell_diagonal([
            spec.real("w1")?,
            spec.real("w2")?,
            spec.real("w3")?,
            spec.real("w4")?,
        ]),
        Family::Werner2 => werner2(spec.real("p")?),
        Family::Isotropic => isotropic(spec.dim("d")?, spec.real("f")?),
        Family::TilesUpb => tiles_upb(),
        Family::PyramidUpb => pyramid_upb(),
        Family::Horodecki3x3 => horodecki3x3(spec.real("a")?),
        Family::HorodeckiMix => horodecki_mix(spec.real("a")?, spec.real("p")?),
        Family::TwoByTwoFamily => two_by_two_family(spec.real("a")?, spec.real("p")?),
        Family::RandomMixed => {
            let (m, n) = (spec.dim("m")?, spec.dim("n")?);
            let rank = spec.int_or("rank", Some((m * n) as u64))? as usize;
            random_mixed(m, n, rank, spec.int_or("seed", Some(0))?)
        }
        Family::RandomSeparable => {
            let (m, n) = (spec.dim("m")?, spec.dim("n")?);
            let terms = spec.int_or("terms", Some(4))? as usize;
            Ok(random_separable(m, n, terms, spec.int_or("seed", Some(0))?)?.0)
        }
    }
}
