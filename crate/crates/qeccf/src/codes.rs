//! Detectability, distance, Knill-Laflamme correctability, classification
//! flags, and the case analysis for sums of translated Clifford codes.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cxla::{CMat, Tol, C64, ZERO};
use crate::errbasis::{NiceErrorBasis, PauliElem, StabilizerSpec};
use crate::error::{Error, Result};
use crate::fourier::{self, GroupAlgebraElem, TransformAssignment};
use crate::matgroup::FinMatGroup;
use crate::repn::{self, ConstituentSet};

/// Smallest weight of an undetectable error, or "n/a" for bases without
/// tensor structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinDistance {
    Weight(usize),
    NotApplicable,
}

impl fmt::Display for MinDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinDistance::Weight(w) => write!(f, "{w}"),
            MinDistance::NotApplicable => write!(f, "n/a"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WeightCount {
    pub detected: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectionReport {
    pub dim_code: usize,
    pub detectable: Vec<usize>,
    pub wt_detect: BTreeMap<usize, WeightCount>,
    pub min_distance: MinDistance,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub is_clifford_of_s: bool,
    pub in_a_of_s: bool,
    /// All loaded components are identities and the projector is a joint
    /// eigenspace of the part of `Z(S)` acting on it by scalars.
    pub is_clifford_table_convention: bool,
}

#[derive(Clone, Debug)]
pub struct CodeAnalysis {
    pub projector: CMat,
    pub dim_code: usize,
    pub detectable: Vec<usize>,
    pub wt_detect: BTreeMap<usize, WeightCount>,
    pub min_distance: MinDistance,
    pub flags: Flags,
    pub assignment: TransformAssignment,
    pub coefficients: GroupAlgebraElem,
}

/// `PgP = λP`, with `λ = tr(PgP)/dim`. Returns `λ` when detectable.
pub fn is_detectable(p: &CMat, g: &CMat, tol: Tol) -> Result<(bool, Option<C64>)> {
    if !p.is_square() || g.rows() != p.rows() || !g.is_square() {
        return Err(Error::Dimension(format!(
            "projector {}x{} vs error {}x{}",
            p.rows(),
            p.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let dim = p.trace().re.round();
    if dim == 0.0 {
        return Ok((true, Some(ZERO)));
    }
    let m = &(p * g) * p;
    let lam = m.trace() / dim;
    let dev = m.dist(&p.scale(lam))?;
    Ok(if dev <= tol.eq_tol {
        (true, Some(lam))
    } else {
        (false, None)
    })
}

/// Orthonormal basis of a code space, for detectability tests that work on
/// the `dim × dim` compression `B† g B` instead of `PgP`.
#[derive(Clone, Debug)]
pub struct CodeSpace {
    basis: CMat,
    basis_adj: CMat,
}

impl CodeSpace {
    pub fn from_projector(p: &CMat, tol: Tol) -> Result<Self> {
        let basis = p.orthonormal_image_basis(tol)?;
        Ok(CodeSpace {
            basis_adj: basis.adjoint(),
            basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    fn judge(&self, gb: &CMat, tol: Tol) -> (bool, C64) {
        let m = &self.basis_adj * gb;
        let k = m.rows();
        let lam = m.trace() / k as f64;
        let mut dev = 0.0f64;
        for i in 0..k {
            for j in 0..k {
                let want = if i == j { lam } else { ZERO };
                dev = dev.max((m.get(i, j) - want).norm());
            }
        }
        (dev <= tol.eq_tol, lam)
    }

    pub fn detects(&self, g: &CMat, tol: Tol) -> (bool, C64) {
        self.judge(&(g * &self.basis), tol)
    }

    pub fn detects_pauli(&self, g: &PauliElem, tol: Tol) -> Result<(bool, C64)> {
        Ok(self.judge(&g.apply(&self.basis)?, tol))
    }
}

/// Runs the detectability test over every element of `E`.
pub fn detectable_set(p: &CMat, e: &NiceErrorBasis) -> Result<DetectionReport> {
    let tol = Tol::default();
    if p.rows() != e.dim() {
        return Err(Error::Dimension(format!(
            "projector on C^{} vs error group on C^{}",
            p.rows(),
            e.dim()
        )));
    }
    if !p.is_projector(tol)? {
        return Err(Error::NotProjector(
            "detectable_set needs an orthogonal projector".into(),
        ));
    }
    let dim = p.trace().re.round() as usize;
    let flags: Vec<bool> = if dim == 0 {
        vec![true; e.order()]
    } else {
        let code = CodeSpace::from_projector(p, tol)?;
        (0..e.order())
            .into_par_iter()
            .map(|g| match e.pauli(g) {
                Some(pe) => code.detects_pauli(pe, tol).map(|r| r.0),
                None => Ok(code.detects(e.group().element(g), tol).0),
            })
            .collect::<Result<Vec<_>>>()?
    };
    let mut wt_detect: BTreeMap<usize, WeightCount> = BTreeMap::new();
    let mut detectable = Vec::new();
    let mut worst = usize::MAX;
    for (g, &ok) in flags.iter().enumerate() {
        let w = e.weight(g);
        let entry = wt_detect.entry(w).or_default();
        entry.total += 1;
        if ok {
            entry.detected += 1;
            detectable.push(g);
        } else {
            worst = worst.min(w);
        }
    }
    let min_distance = if e.is_pauli() {
        MinDistance::Weight(if worst == usize::MAX {
            e.nfactors() + 1
        } else {
            worst
        })
    } else {
        MinDistance::NotApplicable
    };
    Ok(DetectionReport {
        dim_code: dim,
        detectable,
        wt_detect,
        min_distance,
    })
}

/// Minimum distance of a code on `n` qubits by enumerating unsigned Pauli
/// strings in order of weight. Works without materializing the Pauli group.
pub fn pauli_min_distance(code: &CodeSpace, n: usize) -> Result<usize> {
    let tol = Tol::default();
    if code.basis.rows() != 1 << n {
        return Err(Error::Dimension(format!(
            "code on C^{} is not an {n}-qubit code",
            code.basis.rows()
        )));
    }
    for w in 1..=n {
        let supports: Vec<u64> = (0..1u64 << n)
            .filter(|m| m.count_ones() as usize == w)
            .collect();
        let undetected = supports.par_iter().any(|&mask| {
            let bits: Vec<u64> = (0..n)
                .map(|k| 1u64 << k)
                .filter(|b| mask & b != 0)
                .collect();
            (0..3usize.pow(w as u32)).any(|mut code_word| {
                let (mut x, mut z) = (0u64, 0u64);
                for &b in &bits {
                    match code_word % 3 {
                        0 => x |= b,
                        1 => z |= b,
                        _ => {
                            x |= b;
                            z |= b;
                        }
                    }
                    code_word /= 3;
                }
                let p = PauliElem::new(n, x, z, 0).expect("bits within range");
                !code.detects_pauli(&p, tol).map(|r| r.0).unwrap_or(false)
            })
        });
        if undetected {
            return Ok(w);
        }
    }
    Ok(n + 1)
}

/// Stabilizer projector, code space and distance in one call.
pub fn stabilizer_distance(spec: &StabilizerSpec) -> Result<usize> {
    let p = crate::errbasis::stabilizer_projector(spec)?;
    let code = CodeSpace::from_projector(&p, Tol::default())?;
    pauli_min_distance(&code, spec.n())
}

/// Knill-Laflamme conditions `P Eᵢ† Eⱼ P = α_ij P`.
pub fn knill_laflamme_check(p: &CMat, errors: &[CMat], tol: Tol) -> Result<(bool, CMat)> {
    let dim = p.trace().re.round();
    if dim == 0.0 {
        return Err(Error::Domain("zero-dimensional code".into()));
    }
    if let Some(k) = errors
        .iter()
        .position(|e| e.rows() != p.rows() || !e.is_square())
    {
        return Err(Error::Dimension(format!("error {k} has the wrong shape")));
    }
    let n = errors.len();
    let left: Vec<CMat> = errors.iter().map(|e| p * &e.adjoint()).collect();
    let right: Vec<CMat> = errors.iter().map(|e| e * p).collect();
    let mut alpha = CMat::zeros(n, n);
    let mut ok = true;
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            let m = l * r;
            let a = m.trace() / dim;
            alpha.set(i, j, a);
            if m.dist(&p.scale(a))? > tol.eq_tol {
                ok = false;
            }
        }
    }
    if ok && !alpha.is_hermitian(tol) {
        return Err(Error::Domain(
            "Knill-Laflamme matrix is not Hermitian".into(),
        ));
    }
    Ok((ok, alpha))
}

/// Classification flags for a synthesized code.
pub fn classify(
    assign: &TransformAssignment,
    t: &GroupAlgebraElem,
    projector: &CMat,
    cs: &ConstituentSet,
    g: &FinMatGroup,
) -> Result<Flags> {
    let nonzero: Vec<&(usize, CMat)> = assign.nonzero().collect();
    let is_identity = |a: &CMat| a.approx_eq(&CMat::identity(a.rows()), 1e-9);
    let all_identity = !nonzero.is_empty() && nonzero.iter().all(|(_, a)| is_identity(a));
    let is_clifford_of_s = nonzero.len() == 1 && all_identity;
    let in_a_of_s = fourier::in_abelian_algebra(t, g);
    let is_clifford_table_convention = all_identity && is_center_eigenspace(projector, cs, g)?;
    Ok(Flags {
        is_clifford_of_s,
        in_a_of_s,
        is_clifford_table_convention,
    })
}

fn is_center_eigenspace(p: &CMat, cs: &ConstituentSet, g: &FinMatGroup) -> Result<bool> {
    let tol = Tol::default();
    let code = CodeSpace::from_projector(p, tol)?;
    let zs: Vec<usize> = cs
        .sub()
        .iter()
        .copied()
        .filter(|&z| cs.sub().iter().all(|&s| g.commute(z, s)))
        .collect();
    let scalars: Vec<(usize, C64)> = zs
        .iter()
        .filter_map(|&z| {
            let (ok, lam) = code.detects(g.element(z), tol);
            (ok && (lam.norm() - 1.0).abs() < 1e-9).then_some((z, lam))
        })
        .collect();
    let mut q = CMat::zeros(p.rows(), p.cols());
    for (z, lam) in &scalars {
        q.add_scaled(lam.conj() / scalars.len() as f64, g.element(*z))?;
    }
    Ok(q.approx_eq(p, 1e-9))
}

/// Invert an assignment and analyze the resulting code over all of `E`.
pub fn analyze(
    assign: &TransformAssignment,
    cs: &ConstituentSet,
    e: &NiceErrorBasis,
) -> Result<CodeAnalysis> {
    let (t, projector) = fourier::invert(assign, cs, e.group())?;
    let report = detectable_set(&projector, e)?;
    let flags = if report.dim_code > 0 {
        classify(assign, &t, &projector, cs, e.group())?
    } else {
        Flags::default()
    };
    Ok(CodeAnalysis {
        projector,
        dim_code: report.dim_code,
        detectable: report.detectable,
        wt_detect: report.wt_detect,
        min_distance: report.min_distance,
        flags,
        assignment: assign.clone(),
        coefficients: t,
    })
}

/// A direct sum of translates `h·W` of one Clifford code `W`.
#[derive(Clone, Debug)]
pub struct TranslateSumSpec {
    base_constituent: usize,
    translators: Vec<usize>,
    members: Vec<usize>,
    quasikernels: Vec<Vec<(usize, C64)>>,
}

impl TranslateSumSpec {
    /// Translators `B` with `h₁` the identity; each `U(h)·W` must be a distinct constituent.
    pub fn new(
        g: &FinMatGroup,
        cs: &ConstituentSet,
        base_constituent: usize,
        translators: Vec<usize>,
    ) -> Result<Self> {
        if translators.first() != Some(&0) {
            return Err(Error::Domain(
                "the first translator must be the identity".into(),
            ));
        }
        if !g.is_normal(cs.sub())? {
            return Err(Error::NotNormal);
        }
        let base = &cs
            .constituents()
            .get(base_constituent)
            .ok_or(Error::BadIndex(base_constituent))?
            .character;
        let mut members = Vec::with_capacity(translators.len());
        for &h in &translators {
            let ch = repn::conjugate_character(g, cs.sub(), base, g.inv(h))?;
            let j = cs
                .find_character(&ch)
                .ok_or_else(|| Error::Domain(format!("translate by {h} is not a constituent")))?;
            if members.contains(&j) {
                return Err(Error::Domain(format!(
                    "translate by {h} repeats constituent {j}"
                )));
            }
            members.push(j);
        }
        let quasikernels = members
            .iter()
            .map(|&j| repn::quasikernel_scalars(g, cs, j))
            .collect::<Result<Vec<_>>>()?;
        Ok(TranslateSumSpec {
            base_constituent,
            translators,
            members,
            quasikernels,
        })
    }

    /// Builds the spec for a set of constituents, choosing for each the first
    /// element of `E` that moves the first constituent onto it.
    pub fn from_constituents(
        g: &FinMatGroup,
        cs: &ConstituentSet,
        members: &[usize],
    ) -> Result<Self> {
        let base_idx = *members
            .first()
            .ok_or_else(|| Error::Domain("no constituents".into()))?;
        let base = cs.get(base_idx).character.clone();
        let mut translators = vec![0];
        for &j in &members[1..] {
            let target = &cs.get(j).character;
            let h = (0..g.order())
                .find(|&h| {
                    repn::conjugate_character(g, cs.sub(), &base, g.inv(h))
                        .map(|c| repn::chars_equal(&c, target))
                        .unwrap_or(false)
                })
                .ok_or_else(|| {
                    Error::Domain(format!("constituent {j} is not conjugate to {base_idx}"))
                })?;
            translators.push(h);
        }
        TranslateSumSpec::new(g, cs, base_idx, translators)
    }

    pub fn base_constituent(&self) -> usize {
        self.base_constituent
    }

    pub fn translators(&self) -> &[usize] {
        &self.translators
    }

    /// Constituent index of each translate, aligned with the translators.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn quasikernel(&self, k: usize) -> Vec<usize> {
        self.quasikernels[k].iter().map(|(h, _)| *h).collect()
    }

    pub fn projector(&self, cs: &ConstituentSet) -> CMat {
        let d = cs.dim();
        let mut p = CMat::zeros(d, d);
        for &j in &self.members {
            p.add_scaled(C64::new(1.0, 0.0), &cs.get(j).isotypic_projector)
                .expect("same shape");
        }
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub case: u8,
    pub predicted_detectable: bool,
}

/// Case 1: in every quasikernel, detectable iff the scalars agree.
/// Case 2: outside `S`, detectable iff it moves every translate off the sum.
/// Case 3: in `S` but not in every quasikernel, never detectable.
pub fn translate_sum_analyze(
    spec: &TranslateSumSpec,
    cs: &ConstituentSet,
    g: &FinMatGroup,
    x: usize,
) -> Result<CaseReport> {
    cs.check_group(g)?;
    if x >= g.order() {
        return Err(Error::BadIndex(x));
    }
    let in_s = cs.position(x).is_some();
    let mut lambdas = Vec::with_capacity(spec.members.len());
    for (k, &j) in spec.members.iter().enumerate() {
        match spec.quasikernels[k].iter().find(|(h, _)| *h == x) {
            Some((_, lam)) => lambdas.push(*lam),
            None if in_s => check_not_borderline(g, cs, j, x)?,
            None => {}
        }
    }
    if lambdas.len() == spec.members.len() {
        let constant = lambdas.iter().all(|l| (l - lambdas[0]).norm() <= 1e-9);
        return Ok(CaseReport {
            case: 1,
            predicted_detectable: constant,
        });
    }
    if !in_s {
        let mut disjoint = true;
        'outer: for &j in &spec.members {
            let moved = repn::conjugate_character(g, cs.sub(), &cs.get(j).character, g.inv(x))?;
            for &jp in &spec.members {
                if repn::char_inner(&moved, &cs.get(jp).character)?.norm() > 1e-7 {
                    disjoint = false;
                    break 'outer;
                }
            }
        }
        return Ok(CaseReport {
            case: 2,
            predicted_detectable: disjoint,
        });
    }
    Ok(CaseReport {
        case: 3,
        predicted_detectable: false,
    })
}

fn check_not_borderline(g: &FinMatGroup, cs: &ConstituentSet, j: usize, x: usize) -> Result<()> {
    let b = &cs.get(j).isotypic_basis;
    let m = &b.adjoint() * &(g.element(x) * b);
    let k = m.rows();
    let lam = m.trace() / k as f64;
    let dev = m
        .dist(&CMat::identity(k).scale(lam))?
        .max((lam.norm() - 1.0).abs());
    if dev < 1e-5 {
        return Err(Error::AmbiguousCase(format!(
            "element {x} is {dev:.3e} from acting by a scalar on constituent {j}"
        )));
    }
    Ok(())
}
