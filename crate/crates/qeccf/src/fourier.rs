//! Fourier transform on the group algebra `CS` restricted to the constituents
//! of the natural representation, and its inversion into code projectors.

use crate::cxla::{CMat, Tol, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::matgroup::FinMatGroup;
use crate::repn::ConstituentSet;

pub const SUPPORT_THRESHOLD: f64 = 1e-8;

/// Transform-domain components `a_i`; constituents not listed carry zero.
#[derive(Clone, Debug, Default)]
pub struct TransformAssignment {
    values: Vec<(usize, CMat)>,
}

impl TransformAssignment {
    pub fn new(values: Vec<(usize, CMat)>) -> Self {
        TransformAssignment { values }
    }

    pub fn values(&self) -> &[(usize, CMat)] {
        &self.values
    }

    /// Entries whose matrix is not (numerically) zero.
    pub fn nonzero(&self) -> impl Iterator<Item = &(usize, CMat)> {
        self.values.iter().filter(|(_, a)| a.max_abs() > 1e-12)
    }

    /// Dense list of components, zero where unassigned.
    pub fn components(&self, cs: &ConstituentSet) -> Result<Vec<CMat>> {
        let mut out: Vec<CMat> = cs
            .constituents()
            .iter()
            .map(|c| CMat::zeros(c.dim_irr, c.dim_irr))
            .collect();
        for (i, a) in &self.values {
            let slot = out.get_mut(*i).ok_or(Error::BadIndex(*i))?;
            if a.rows() != slot.rows() || a.cols() != slot.cols() {
                return Err(Error::Assignment(format!(
                    "component for constituent {i} is {}x{}, expected {}x{}",
                    a.rows(),
                    a.cols(),
                    slot.rows(),
                    slot.cols()
                )));
            }
            slot.add_scaled(ONE, a)?;
        }
        Ok(out)
    }

    /// Every `a_i` must be a Hermitian idempotent of the right size.
    pub fn validate(&self, cs: &ConstituentSet, tol: Tol) -> Result<()> {
        let mut seen = vec![false; cs.len()];
        for (i, a) in &self.values {
            if *i >= cs.len() {
                return Err(Error::BadIndex(*i));
            }
            if std::mem::replace(&mut seen[*i], true) {
                return Err(Error::Assignment(format!("constituent {i} assigned twice")));
            }
            let n = cs.get(*i).dim_irr;
            if a.rows() != n || a.cols() != n {
                return Err(Error::Assignment(format!("component {i} must be {n}x{n}")));
            }
            if !a.is_hermitian(tol) {
                return Err(Error::Assignment(format!("component {i} is not Hermitian")));
            }
            if !a.is_projector(tol)? {
                return Err(Error::Assignment(format!(
                    "component {i} is not idempotent"
                )));
            }
        }
        Ok(())
    }
}

/// `T = Σ_s T_s s` with coefficients aligned to the sorted subgroup.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAlgebraElem {
    sub: Vec<usize>,
    coeffs: Vec<C64>,
}

impl GroupAlgebraElem {
    pub fn new(sub: Vec<usize>, coeffs: Vec<C64>) -> Result<Self> {
        if sub.len() != coeffs.len() {
            return Err(Error::Domain(
                "one coefficient per subgroup element required".into(),
            ));
        }
        if sub.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain(
                "subgroup indices must be sorted and distinct".into(),
            ));
        }
        Ok(GroupAlgebraElem { sub, coeffs })
    }

    pub fn zero(sub: &[usize]) -> Self {
        GroupAlgebraElem {
            sub: sub.to_vec(),
            coeffs: vec![ZERO; sub.len()],
        }
    }

    /// The group identity (element 0) with coefficient one.
    pub fn identity(sub: &[usize]) -> Self {
        let mut t = GroupAlgebraElem::zero(sub);
        t.coeffs[0] = ONE;
        t
    }

    /// `(1/|S|) Σ_s s`
    pub fn average(sub: &[usize]) -> Self {
        let w = C64::new(1.0 / sub.len() as f64, 0.0);
        GroupAlgebraElem {
            sub: sub.to_vec(),
            coeffs: vec![w; sub.len()],
        }
    }

    pub fn sub(&self) -> &[usize] {
        &self.sub
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, g: usize) -> C64 {
        self.sub
            .binary_search(&g)
            .map(|k| self.coeffs[k])
            .unwrap_or(ZERO)
    }

    pub fn dist(&self, other: &GroupAlgebraElem) -> Result<f64> {
        if self.sub != other.sub {
            return Err(Error::Domain(
                "group algebra elements over different subgroups".into(),
            ));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Convolution product in `CS`.
    pub fn convolve(&self, other: &GroupAlgebraElem, g: &FinMatGroup) -> Result<GroupAlgebraElem> {
        if self.sub != other.sub {
            return Err(Error::Domain(
                "group algebra elements over different subgroups".into(),
            ));
        }
        let mut out = vec![ZERO; self.sub.len()];
        for (a, &x) in self.sub.iter().zip(&self.coeffs) {
            if x == ZERO {
                continue;
            }
            for (b, &y) in other.sub.iter().zip(&other.coeffs) {
                let k = self
                    .sub
                    .binary_search(&g.mul(*a, *b))
                    .map_err(|_| Error::NotClosed)?;
                out[k] += x * y;
            }
        }
        Ok(GroupAlgebraElem {
            sub: self.sub.clone(),
            coeffs: out,
        })
    }

    /// `Σ_s T_s U(s)` in the natural representation.
    pub fn matrix_image(&self, g: &FinMatGroup) -> CMat {
        let mut m = CMat::zeros(g.dim(), g.dim());
        for (&s, &c) in self.sub.iter().zip(&self.coeffs) {
            if c != ZERO {
                m.add_scaled(c, g.element(s))
                    .expect("group elements share one shape");
            }
        }
        m
    }
}

fn check_domain(sub: &[usize], cs: &ConstituentSet) -> Result<()> {
    if sub != cs.sub() {
        return Err(Error::Domain(
            "group algebra element and constituent set use different subgroups".into(),
        ));
    }
    Ok(())
}

/// Component `i` is `Σ_s T_s ρ_i(s)`.
pub fn forward_transform(t: &GroupAlgebraElem, cs: &ConstituentSet) -> Result<Vec<CMat>> {
    check_domain(&t.sub, cs)?;
    cs.constituents()
        .iter()
        .map(|c| {
            let mut m = CMat::zeros(c.dim_irr, c.dim_irr);
            for (rho, &x) in c.irrep_mats.iter().zip(&t.coeffs) {
                m.add_scaled(x, rho)?;
            }
            Ok(m)
        })
        .collect()
}

/// `T_s = (1/|S|) Σ_i n_i tr(ρ_i(s⁻¹) a_i)` for arbitrary components.
pub fn inverse_coefficients(
    components: &[CMat],
    cs: &ConstituentSet,
    g: &FinMatGroup,
) -> Result<GroupAlgebraElem> {
    cs.check_group(g)?;
    if components.len() != cs.len() {
        return Err(Error::Domain(format!(
            "{} components for {} constituents",
            components.len(),
            cs.len()
        )));
    }
    let order = cs.sub().len() as f64;
    let coeffs = cs
        .sub()
        .iter()
        .map(|&s| {
            let si = cs.position(g.inv(s)).ok_or(Error::NotClosed)?;
            let mut acc = ZERO;
            for (c, a) in cs.constituents().iter().zip(components) {
                if a.max_abs() == 0.0 {
                    continue;
                }
                acc += (&c.irrep_mats[si] * a).trace() * c.dim_irr as f64;
            }
            Ok(acc / order)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupAlgebraElem {
        sub: cs.sub().to_vec(),
        coeffs,
    })
}

/// Group-algebra element and code projector for a validated assignment.
pub fn invert(
    assign: &TransformAssignment,
    cs: &ConstituentSet,
    g: &FinMatGroup,
) -> Result<(GroupAlgebraElem, CMat)> {
    let tol = Tol::default();
    assign.validate(cs, tol)?;
    let t = inverse_coefficients(&assign.components(cs)?, cs, g)?;
    let p = t.matrix_image(g);
    if !p.is_projector(tol)? {
        return Err(Error::NotProjector(
            "inverted assignment did not yield a projector".into(),
        ));
    }
    let expected: f64 = assign
        .values
        .iter()
        .map(|(i, a)| cs.get(*i).multiplicity as f64 * a.trace().re)
        .sum();
    if (p.trace().re - expected).abs() > tol.rank_tol {
        return Err(Error::Assignment(format!(
            "trace {} differs from the expected dimension {expected}",
            p.trace().re
        )));
    }
    Ok((t, p))
}

/// `(n_i/|S|) Σ_s conj(χ_i(s)) s` as a group-algebra element.
pub fn central_idempotent(cs: &ConstituentSet, which: usize) -> Result<GroupAlgebraElem> {
    let c = cs.constituents().get(which).ok_or(Error::BadIndex(which))?;
    let w = c.dim_irr as f64 / cs.sub().len() as f64;
    let coeffs = c.character.iter().map(|z| z.conj() * w).collect();
    Ok(GroupAlgebraElem {
        sub: cs.sub().to_vec(),
        coeffs,
    })
}

/// Projector onto the isotypic component of constituent `which`.
pub fn single_character_projector(
    cs: &ConstituentSet,
    which: usize,
    g: &FinMatGroup,
) -> Result<CMat> {
    cs.check_group(g)?;
    Ok(central_idempotent(cs, which)?.matrix_image(g))
}

/// Elements of `E` whose coefficient exceeds `threshold` in modulus.
pub fn support(t: &GroupAlgebraElem, threshold: f64) -> Vec<usize> {
    t.sub
        .iter()
        .zip(&t.coeffs)
        .filter(|(_, c)| c.norm() > threshold)
        .map(|(&s, _)| s)
        .collect()
}

/// The support of `t` pairwise commutes, so `t` lies in the algebra of an
/// abelian subgroup.
pub fn in_abelian_algebra(t: &GroupAlgebraElem, g: &FinMatGroup) -> bool {
    g.is_abelian(&support(t, SUPPORT_THRESHOLD))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::errbasis::{pauli_group, stabilizer_projector, PauliElem, StabilizerSpec};
    use crate::repn::decompose_natural;

    fn pz_plus() -> CMat {
        CMat::from_real(&[&[1.0, 0.0], &[0.0, 0.0]])
    }

    #[test]
    fn identity_maps_to_identity_components() {
        let e = pauli_group(2).unwrap();
        let z = e
            .index_of_pauli(&PauliElem::parse_real("ZZ").unwrap())
            .unwrap();
        let x = e
            .index_of_pauli(&PauliElem::parse_real("XX").unwrap())
            .unwrap();
        let sub = e.group().subgroup_from(&[z, x]).unwrap();
        let cs = decompose_natural(&e, &sub).unwrap();
        let comps = forward_transform(&GroupAlgebraElem::identity(cs.sub()), &cs).unwrap();
        for (c, m) in cs.constituents().iter().zip(&comps) {
            assert!(m.approx_eq(&CMat::identity(c.dim_irr), 1e-12));
        }
    }

    #[test]
    fn average_picks_out_the_trivial_character() {
        let e = pauli_group(2).unwrap();
        let z = e
            .index_of_pauli(&PauliElem::parse_real("ZZ").unwrap())
            .unwrap();
        let sub = e.group().subgroup_from(&[z]).unwrap();
        let cs = decompose_natural(&e, &sub).unwrap();
        let comps = forward_transform(&GroupAlgebraElem::average(cs.sub()), &cs).unwrap();
        for (c, m) in cs.constituents().iter().zip(&comps) {
            let trivial = c.character.iter().all(|v| (v - ONE).norm() < 1e-9);
            assert!((m.get(0, 0) - if trivial { ONE } else { ZERO }).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_assignment_gives_zero() {
        let e = pauli_group(2).unwrap();
        let cs = decompose_natural(&e, &[0, 1]).unwrap();
        let (t, p) = invert(&TransformAssignment::default(), &cs, e.group()).unwrap();
        assert!(support(&t, SUPPORT_THRESHOLD).is_empty());
        assert_eq!(p.max_abs(), 0.0);
    }

    #[test]
    fn gottesman_subgroup_gives_the_stabilizer_projector() {
        let e = pauli_group(5).unwrap();
        let gens: Vec<PauliElem> = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
            .iter()
            .map(|s| PauliElem::parse_real(s).unwrap())
            .collect();
        let idx: Vec<usize> = gens.iter().map(|p| e.index_of_pauli(p).unwrap()).collect();
        let sub = e.group().subgroup_from(&idx).unwrap();
        let cs = decompose_natural(&e, &sub).unwrap();
        let trivial = cs
            .constituents()
            .iter()
            .position(|c| c.character.iter().all(|v| (v - ONE).norm() < 1e-9))
            .unwrap();
        let (t, p) = invert(
            &TransformAssignment::new(vec![(trivial, CMat::identity(1))]),
            &cs,
            e.group(),
        )
        .unwrap();
        assert!(t.dist(&GroupAlgebraElem::average(cs.sub())).unwrap() < 1e-12);
        let want = stabilizer_projector(&StabilizerSpec::new(gens).unwrap()).unwrap();
        assert!(p.approx_eq(&want, 1e-12));
        assert_eq!(support(&t, SUPPORT_THRESHOLD), cs.sub());
        assert!(in_abelian_algebra(&t, e.group()));
    }

    #[test]
    fn invalid_assignments_are_rejected() {
        let e = pauli_group(5).unwrap();
        let gens: Vec<PauliElem> = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
            .iter()
            .map(|s| PauliElem::parse_real(s).unwrap())
            .collect();
        let s = e.pauli_commutant(&gens).unwrap();
        let cs = decompose_natural(&e, &s).unwrap();
        let x = CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let nonh = CMat::from_real(&[&[1.0, 1.0], &[0.0, 0.0]]);
        for bad in [x, nonh, CMat::identity(3)] {
            let a = TransformAssignment::new(vec![(0, bad)]);
            assert!(matches!(
                invert(&a, &cs, e.group()),
                Err(Error::Assignment(_))
            ));
        }
        let twice = TransformAssignment::new(vec![(0, pz_plus()), (0, pz_plus())]);
        assert!(invert(&twice, &cs, e.group()).is_err());
        let p = single_character_projector(&cs, 3, e.group()).unwrap();
        assert!(p.approx_eq(&cs.get(3).isotypic_projector, 1e-9));
        let (_, q) = invert(
            &TransformAssignment::new(vec![(3, CMat::identity(2))]),
            &cs,
            e.group(),
        )
        .unwrap();
        assert!(p.approx_eq(&q, 1e-9));
    }
}
