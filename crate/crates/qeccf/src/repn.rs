//! Irreducible constituents of the natural representation of a subgroup.
//!
//! A random Hermitian matrix averaged over conjugation by `S` lies in the
//! commutant; its eigenspaces are irreducible `S`-invariant subspaces for a
//! generic sample. Subspaces with equal characters are collected into
//! isotypic components.
//!
//! Each constituent gets a reproducible carrier basis. The first constituent
//! of each conjugacy orbit is refined by compressions of the elements of `S`
//! in index order and phase-fixed. Later members of the orbit reuse it, moved
//! by the first element of `E` that carries it into their isotypic component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cxla::{CMat, Tol, C64, ZERO};
use crate::errbasis::NiceErrorBasis;
use crate::error::{Error, Result};
use crate::matgroup::FinMatGroup;

pub const DEFAULT_SEED: u64 = 0x51f7_2c0d;
const MAX_ATTEMPTS: u64 = 8;
const SPLIT_GAP: f64 = 1e-6;
const CHAR_TOL: f64 = 1e-7;
/// Weight of the anti-Hermitian part when ordering eigenvectors of a compression.
const IMAG_WEIGHT: f64 = std::f64::consts::FRAC_1_PI;

/// A character as values on the elements of `S`, in the order of `ConstituentSet::sub`.
pub type Character = Vec<C64>;

#[derive(Clone, Debug)]
pub struct IrrConstituent {
    pub dim_irr: usize,
    pub multiplicity: usize,
    pub character: Character,
    pub isotypic_projector: CMat,
    /// Orthonormal basis of the whole isotypic component.
    pub isotypic_basis: CMat,
    /// `ρ(s)` for each element of `S`, in subgroup order.
    pub irrep_mats: Vec<CMat>,
    pub carrier_basis: CMat,
}

#[derive(Clone, Debug)]
pub struct ConstituentSet {
    sub: Vec<usize>,
    group_order: usize,
    dim: usize,
    seed: u64,
    constituents: Vec<IrrConstituent>,
}

impl ConstituentSet {
    /// Sorted element indices of `S`.
    pub fn sub(&self) -> &[usize] {
        &self.sub
    }

    pub fn constituents(&self) -> &[IrrConstituent] {
        &self.constituents
    }

    pub fn get(&self, i: usize) -> &IrrConstituent {
        &self.constituents[i]
    }

    pub fn len(&self) -> usize {
        self.constituents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constituents.is_empty()
    }

    /// Dimension of the natural space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Position of element `g` of `E` inside `sub`.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.sub.binary_search(&g).ok()
    }

    pub(crate) fn check_group(&self, g: &FinMatGroup) -> Result<()> {
        if g.order() != self.group_order || g.dim() != self.dim {
            return Err(Error::Domain(
                "constituent set belongs to a different group".into(),
            ));
        }
        Ok(())
    }

    /// Index of the constituent whose character equals `c`.
    pub fn find_character(&self, c: &[C64]) -> Option<usize> {
        self.constituents
            .iter()
            .position(|k| chars_equal(&k.character, c))
    }

    /// One line per constituent: dimension, multiplicity, leading character values.
    pub fn inventory(&self) -> String {
        let mut s = format!(
            "|S| = {}, {} constituents on C^{}\n",
            self.sub.len(),
            self.constituents.len(),
            self.dim
        );
        for (i, c) in self.constituents.iter().enumerate() {
            let head: Vec<String> = c.character.iter().take(8).map(|z| fmt_c(*z)).collect();
            s.push_str(&format!(
                "  [{i:>2}] dim {} x mult {}  chi = ({}{})\n",
                c.dim_irr,
                c.multiplicity,
                head.join(", "),
                if c.character.len() > 8 { ", ..." } else { "" }
            ));
        }
        s
    }
}

fn fmt_c(z: C64) -> String {
    let r = |x: f64| {
        if x.abs() < 5e-7 {
            0.0
        } else {
            (x * 1e6).round() / 1e6
        }
    };
    let (re, im) = (r(z.re), r(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else {
        format!("{re}{:+}i", im)
    }
}

pub fn chars_equal(a: &[C64], b: &[C64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= CHAR_TOL)
}

/// Decomposes the natural representation of `sub ⊆ E` with the default seed.
pub fn decompose_natural(e: &NiceErrorBasis, sub: &[usize]) -> Result<ConstituentSet> {
    decompose_with_seed(e.group(), sub, DEFAULT_SEED)
}

/// Decomposes the natural representation of `sub` in `g`.
pub fn decompose_with_seed(g: &FinMatGroup, sub: &[usize], seed: u64) -> Result<ConstituentSet> {
    let mut sub = sub.to_vec();
    sub.sort_unstable();
    sub.dedup();
    if sub.iter().any(|&s| s >= g.order()) || !g.is_closed(&sub) {
        return Err(Error::NotClosed);
    }
    let tol = Tol::default();
    let d = g.dim();
    let mut last_err = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        match split_once(g, &sub, &mut rng, tol) {
            Ok(mut constituents) => {
                sort_constituents(&mut constituents);
                let carriers = assign_bases(g, &sub, &constituents)?;
                let constituents = constituents
                    .into_iter()
                    .zip(carriers)
                    .map(|(raw, carrier)| finish(g, &sub, raw, carrier))
                    .collect::<Result<Vec<_>>>()?;
                let cs = ConstituentSet {
                    sub,
                    group_order: g.order(),
                    dim: d,
                    seed,
                    constituents,
                };
                verify(g, &cs, &mut rng)?;
                return Ok(cs);
            }
            Err(msg) => last_err = msg,
        }
    }
    Err(Error::Decomposition(format!(
        "no generic commutant sample in {MAX_ATTEMPTS} attempts: {last_err}"
    )))
}

struct Raw {
    dim_irr: usize,
    character: Character,
    subspaces: Vec<CMat>,
}

/// One sampling attempt. `Err` carries the reason to resample.
fn split_once(
    g: &FinMatGroup,
    sub: &[usize],
    rng: &mut ChaCha8Rng,
    tol: Tol,
) -> std::result::Result<Vec<Raw>, String> {
    let d = g.dim();
    let h = CMat::random_hermitian(d, rng);
    let mut c = CMat::zeros(d, d);
    let w = C64::new(1.0 / sub.len() as f64, 0.0);
    for &s in sub {
        let u = g.element(s);
        let term = &(u * &h) * &u.adjoint();
        c.add_scaled(w, &term).map_err(|e| e.to_string())?;
    }
    let eig = c
        .eig_hermitian(Tol {
            eq_tol: 1e-8,
            ..tol
        })
        .map_err(|e| e.to_string())?;

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..d {
        match clusters.last_mut() {
            Some(cl) if eig.values[k] - eig.values[*cl.last().unwrap()] < SPLIT_GAP => cl.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let mut raws: Vec<Raw> = Vec::new();
    for cl in clusters {
        let b = eig.vectors.select_columns(&cl);
        let bh = b.adjoint();
        let character: Character = sub
            .iter()
            .map(|&s| (&bh * &(g.element(s) * &b)).trace())
            .collect();
        let norm = char_norm(&character);
        if (norm - 1.0).abs() > 1e-6 {
            return Err(format!(
                "eigenspace of dimension {} is reducible (norm {norm:.6})",
                cl.len()
            ));
        }
        match raws
            .iter_mut()
            .find(|r| chars_equal(&r.character, &character))
        {
            Some(r) => r.subspaces.push(b),
            None => raws.push(Raw {
                dim_irr: cl.len(),
                character,
                subspaces: vec![b],
            }),
        }
    }
    Ok(raws)
}

fn char_norm(c: &[C64]) -> f64 {
    c.iter().map(|z| z.norm_sqr()).sum::<f64>() / c.len() as f64
}

fn char_key(c: &[C64]) -> Vec<(i64, i64)> {
    let q = |x: f64| -((x * 1e6).round() as i64);
    c.iter().map(|z| (q(z.re), q(z.im))).collect()
}

fn sort_constituents(raws: &mut [Raw]) {
    raws.sort_by(|a, b| {
        a.dim_irr
            .cmp(&b.dim_irr)
            .then_with(|| char_key(&a.character).cmp(&char_key(&b.character)))
    });
}

fn finish(g: &FinMatGroup, sub: &[usize], raw: Raw, carrier: CMat) -> Result<IrrConstituent> {
    let isotypic_basis = isotypic_basis(&raw.subspaces)?;
    let isotypic_projector = &isotypic_basis * &isotypic_basis.adjoint();
    let ch = carrier.adjoint();
    let irrep_mats = sub
        .iter()
        .map(|&s| &ch * &(g.element(s) * &carrier))
        .collect();
    Ok(IrrConstituent {
        dim_irr: raw.dim_irr,
        multiplicity: raw.subspaces.len(),
        character: raw.character,
        isotypic_projector,
        isotypic_basis,
        irrep_mats,
        carrier_basis: carrier,
    })
}

fn assign_bases(g: &FinMatGroup, sub: &[usize], raws: &[Raw]) -> Result<Vec<CMat>> {
    let tol = Tol::default();
    let mut carriers: Vec<CMat> = Vec::with_capacity(raws.len());
    let mut roots: Vec<usize> = Vec::new();
    for j in 0..raws.len() {
        let iso = isotypic_basis(&raws[j].subspaces)?;
        let proj = &iso * &iso.adjoint();
        let translated = roots
            .iter()
            .filter(|&&r| raws[r].dim_irr == raws[j].dim_irr)
            .find_map(|&r| translate_into(g, sub, &carriers[r], &proj));
        match translated {
            Some(b) => carriers.push(b),
            None => {
                carriers.push(canonical_basis(g, sub, &raws[j].subspaces[0], tol)?);
                roots.push(j);
            }
        }
    }
    Ok(carriers)
}

/// First `U(h)·B` (h in index order) that lies in the image of `proj` and is `S`-invariant.
fn translate_into(g: &FinMatGroup, sub: &[usize], b: &CMat, proj: &CMat) -> Option<CMat> {
    (0..g.order()).find_map(|h| {
        let t = g.element(h) * b;
        if (proj * &t).dist(&t).ok()? > 1e-7 {
            return None;
        }
        let th = t.adjoint();
        let invariant = sub.iter().all(|&s| {
            let ut = g.element(s) * &t;
            let back = &t * &(&th * &ut);
            ut.dist(&back).map(|x| x <= 1e-7).unwrap_or(false)
        });
        invariant.then_some(t)
    })
}

fn isotypic_basis(subspaces: &[CMat]) -> Result<CMat> {
    let mut b = subspaces[0].clone();
    for s in &subspaces[1..] {
        b = b.hcat(s)?;
    }
    Ok(b)
}

/// Basis of the span of `b` fixed by compressions of `U(s)`, `s ∈ sub` in
/// order, and by phases making the first nonzero `⟨v_k|U(s)|v_0⟩` positive.
pub fn canonical_basis(g: &FinMatGroup, sub: &[usize], b: &CMat, tol: Tol) -> Result<CMat> {
    let n = b.cols();
    let mut blocks: Vec<CMat> = vec![b.clone()];
    let mut passes = 0;
    while blocks.iter().any(|q| q.cols() > 1) {
        passes += 1;
        if passes > n + 1 {
            return Err(Error::Decomposition(
                "carrier basis refinement did not converge".into(),
            ));
        }
        for &s in sub {
            let u = g.element(s);
            let mut next = Vec::with_capacity(blocks.len());
            for q in blocks {
                if q.cols() == 1 {
                    next.push(q);
                    continue;
                }
                next.extend(split_block(&q, u, tol)?);
            }
            blocks = next;
            if blocks.iter().all(|q| q.cols() == 1) {
                break;
            }
        }
    }
    let mut cols: Vec<Vec<C64>> = blocks.iter().map(|q| q.column(0)).collect();
    if let Some(z) = cols[0].iter().copied().find(|z| z.norm() > 1e-6) {
        let ph = z.conj() / z.norm();
        cols[0].iter_mut().for_each(|x| *x *= ph);
    }
    let v0 = CMat::from_columns(&cols[..1])?;
    for k in 1..n {
        let vk = CMat::from_columns(&cols[k..k + 1])?.adjoint();
        let amp = sub.iter().find_map(|&s| {
            let a = (&vk * &(g.element(s) * &v0)).get(0, 0);
            (a.norm() > 1e-6).then_some(a)
        });
        let a = amp.ok_or_else(|| Error::Decomposition("carrier is not irreducible".into()))?;
        let ph = a / a.norm();
        cols[k].iter_mut().for_each(|x| *x *= ph);
    }
    CMat::from_columns(&cols)
}

fn split_block(q: &CMat, u: &CMat, tol: Tol) -> Result<Vec<CMat>> {
    let qh = q.adjoint();
    let m = &qh * &(u * q);
    let mh = m.adjoint();
    let k = m.rows();
    let a = CMat::from_fn(k, k, |i, j| {
        let herm = (m.get(i, j) + mh.get(i, j)) * 0.5;
        let anti = (m.get(i, j) - mh.get(i, j)) * C64::new(0.0, -0.5);
        herm + anti * IMAG_WEIGHT
    });
    let eig = a.eig_hermitian(Tol {
        eq_tol: 1e-8,
        ..tol
    })?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in (0..k).rev() {
        match groups.last_mut() {
            Some(gr) if eig.values[*gr.last().unwrap()] - eig.values[i] < SPLIT_GAP => gr.push(i),
            _ => groups.push(vec![i]),
        }
    }
    if groups.len() == 1 {
        return Ok(vec![q.clone()]);
    }
    Ok(groups
        .iter()
        .map(|gr| q * &eig.vectors.select_columns(gr))
        .collect())
}

fn verify(g: &FinMatGroup, cs: &ConstituentSet, rng: &mut ChaCha8Rng) -> Result<()> {
    let d = g.dim();
    let total: usize = cs
        .constituents
        .iter()
        .map(|c| c.dim_irr * c.multiplicity)
        .sum();
    if total != d {
        return Err(Error::Decomposition(format!(
            "constituent dimensions sum to {total}, expected {d}"
        )));
    }
    let order = cs.sub.len() as f64;
    let mut sum = CMat::zeros(d, d);
    for (i, c) in cs.constituents.iter().enumerate() {
        let mut formula = CMat::zeros(d, d);
        for (k, &s) in cs.sub.iter().enumerate() {
            formula.add_scaled(
                c.character[k].conj() * (c.dim_irr as f64 / order),
                g.element(s),
            )?;
        }
        let dev = formula.dist(&c.isotypic_projector)?;
        if dev > 1e-7 {
            return Err(Error::Decomposition(format!(
                "isotypic projector {i} deviates from the character formula by {dev:.3e}"
            )));
        }
        if c.character
            .iter()
            .any(|z| z.norm() > c.dim_irr as f64 + 1e-7)
        {
            return Err(Error::Decomposition(format!(
                "character {i} exceeds its degree"
            )));
        }
        sum.add_scaled(C64::new(1.0, 0.0), &c.isotypic_projector)?;
        let n = cs.sub.len();
        let check = |a: usize, b: usize| -> Result<()> {
            let ab = cs.position(g.mul(cs.sub[a], cs.sub[b])).expect("closed");
            let lhs = &c.irrep_mats[a] * &c.irrep_mats[b];
            let dev = lhs.dist(&c.irrep_mats[ab])?;
            if dev > 1e-7 {
                return Err(Error::Decomposition(format!(
                    "irrep {i} fails the homomorphism law by {dev:.3e}"
                )));
            }
            Ok(())
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    check(a, b)?;
                }
            }
        } else {
            for _ in 0..10_000 {
                check(rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
    }
    if !sum.approx_eq(&CMat::identity(d), 1e-7) {
        return Err(Error::Decomposition(
            "isotypic projectors do not sum to the identity".into(),
        ));
    }
    Ok(())
}

/// `(1/|S|) Σ c1(s) conj(c2(s))`.
pub fn char_inner(c1: &[C64], c2: &[C64]) -> Result<C64> {
    if c1.len() != c2.len() || c1.is_empty() {
        return Err(Error::Domain(format!(
            "characters on {} and {} elements",
            c1.len(),
            c2.len()
        )));
    }
    Ok(c1.iter().zip(c2).map(|(a, b)| a * b.conj()).sum::<C64>() / c1.len() as f64)
}

/// `s ↦ c(h s h⁻¹)`. `sub` must be sorted.
pub fn conjugate_character(
    g: &FinMatGroup,
    sub: &[usize],
    c: &[C64],
    h: usize,
) -> Result<Character> {
    if c.len() != sub.len() {
        return Err(Error::Domain("character and subgroup sizes differ".into()));
    }
    if h >= g.order() {
        return Err(Error::BadIndex(h));
    }
    sub.iter()
        .map(|&s| {
            sub.binary_search(&g.conj(h, s))
                .map(|k| c[k])
                .map_err(|_| Error::NotNormal)
        })
        .collect()
}

/// Elements `g` of the group with `χ^g = χ`.
pub fn inertia_group(g: &FinMatGroup, sub: &[usize], c: &[C64]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for h in 0..g.order() {
        if chars_equal(&conjugate_character(g, sub, c, h)?, c) {
            out.push(h);
        }
    }
    Ok(out)
}

/// Elements of `E` acting on the isotypic component of constituent `which`
/// as a scalar, together with that scalar.
pub fn quasikernel_scalars(
    g: &FinMatGroup,
    cs: &ConstituentSet,
    which: usize,
) -> Result<Vec<(usize, C64)>> {
    cs.check_group(g)?;
    let c = cs.constituents.get(which).ok_or(Error::BadIndex(which))?;
    let b = &c.isotypic_basis;
    let bh = b.adjoint();
    let k = b.cols();
    let mut out = Vec::new();
    for h in 0..g.order() {
        let m = &bh * &(g.element(h) * b);
        let lam = m.trace() / k as f64;
        let mut dev = (lam.norm() - 1.0).abs();
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { lam } else { ZERO };
                dev = dev.max((m.get(i, j) - want).norm());
            }
        }
        if dev <= Tol::default().eq_tol.max(1e-9) {
            out.push((h, lam));
        }
    }
    Ok(out)
}

pub fn quasikernel(g: &FinMatGroup, cs: &ConstituentSet, which: usize) -> Result<Vec<usize>> {
    Ok(quasikernel_scalars(g, cs, which)?
        .into_iter()
        .map(|(h, _)| h)
        .collect())
}
