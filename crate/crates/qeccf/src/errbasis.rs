//! Error groups: real n-qubit Pauli groups with symplectic bookkeeping,
//! shift-and-clock qudit bases, and nice error bases loaded from text files.
//! Also stabilizer generator sets and their code projectors.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use crate::cxla::{CMat, Tol, C64, I, ONE, ZERO};
use crate::error::{Error, Result};
use crate::matgroup::FinMatGroup;

pub const MAX_PAULI_QUBITS: usize = 5;
/// Qubit limit for symbolic Pauli strings (stabilizer projectors are dense 2ⁿ×2ⁿ).
pub const MAX_STRING_QUBITS: usize = 12;

/// `i^phase · X(x) · Z(z)` on `n` qubits.
///
/// Qubit `k` (leftmost letter = qubit 0) sits at bit `n - 1 - k`, matching the
/// big-endian basis order of the Kronecker product. The letter `Y` means the
/// real product `XZ` when parsed with [`PauliElem::parse_real`] and the
/// Hermitian `iXZ` with [`PauliElem::parse_hermitian`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliElem {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliElem {
    pub fn new(n: usize, x: u64, z: u64, phase: u8) -> Result<Self> {
        if n == 0 || n > MAX_STRING_QUBITS {
            return Err(Error::QubitRange(n));
        }
        let mask = (1u64 << n) - 1;
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Domain(format!("bit vectors exceed {n} qubits")));
        }
        Ok(PauliElem {
            n,
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn identity(n: usize) -> Self {
        PauliElem {
            n,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_bits(&self) -> u64 {
        self.x
    }

    pub fn z_bits(&self) -> u64 {
        self.z
    }

    /// Exponent `k` of the scalar `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    fn bit(&self, qubit: usize) -> u64 {
        1 << (self.n - 1 - qubit)
    }

    fn parse_with(s: &str, y_phase: u8) -> Result<Self> {
        let s = s.trim();
        let (mut phase, body) = if let Some(r) = s.strip_prefix('-') {
            (2u8, r)
        } else if let Some(r) = s.strip_prefix('+') {
            (0, r)
        } else {
            (0, s)
        };
        let n = body.chars().count();
        if n == 0 || n > MAX_STRING_QUBITS {
            return Err(Error::Stabilizer(format!(
                "bad Pauli string length in {s:?}"
            )));
        }
        let mut p = PauliElem::identity(n);
        for (k, c) in body.chars().enumerate() {
            let b = p.bit(k);
            match c.to_ascii_uppercase() {
                'I' => {}
                'X' => p.x |= b,
                'Z' => p.z |= b,
                'Y' => {
                    p.x |= b;
                    p.z |= b;
                    phase += y_phase;
                }
                other => {
                    return Err(Error::Stabilizer(format!(
                        "unknown letter {other:?} in {s:?}"
                    )))
                }
            }
        }
        p.phase = phase % 4;
        Ok(p)
    }

    /// Parses `[+|-]{I,X,Y,Z}*` with `Y = XZ` (real convention).
    pub fn parse_real(s: &str) -> Result<Self> {
        PauliElem::parse_with(s, 0)
    }

    /// Parses `[+|-]{I,X,Y,Z}*` with `Y = iXZ` (Hermitian convention).
    pub fn parse_hermitian(s: &str) -> Result<Self> {
        PauliElem::parse_with(s, 1)
    }

    /// Letters with `Y` standing for `XZ`.
    pub fn letters(&self) -> String {
        (0..self.n)
            .map(|k| {
                let b = self.bit(k);
                match (self.x & b != 0, self.z & b != 0) {
                    (false, false) => 'I',
                    (true, false) => 'X',
                    (true, true) => 'Y',
                    (false, true) => 'Z',
                }
            })
            .collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn mul(&self, o: &PauliElem) -> PauliElem {
        debug_assert_eq!(self.n, o.n);
        let sign = 2 * ((self.z & o.x).count_ones() % 2) as u8;
        PauliElem {
            n: self.n,
            x: self.x ^ o.x,
            z: self.z ^ o.z,
            phase: (self.phase + o.phase + sign) % 4,
        }
    }

    /// Symplectic form `a·b' + a'·b` is zero.
    pub fn commutes(&self, o: &PauliElem) -> bool {
        ((self.x & o.z) ^ (self.z & o.x)).count_ones() % 2 == 0
    }

    pub fn negate(&self) -> PauliElem {
        PauliElem {
            phase: (self.phase + 2) % 4,
            ..*self
        }
    }

    fn scalar(&self) -> C64 {
        [ONE, I, -ONE, -I][self.phase as usize]
    }

    /// Coefficient of `|v ⊕ x⟩` in the image of `|v⟩`.
    #[inline]
    fn coeff(&self, v: usize) -> C64 {
        if (self.z & v as u64).count_ones() % 2 == 1 {
            -self.scalar()
        } else {
            self.scalar()
        }
    }

    pub fn matrix(&self) -> CMat {
        let d = 1usize << self.n;
        let mut m = CMat::zeros(d, d);
        for v in 0..d {
            m.set(v ^ self.x as usize, v, self.coeff(v));
        }
        m
    }

    /// `self · m` in O(rows·cols) using the monomial structure.
    pub fn apply(&self, m: &CMat) -> Result<CMat> {
        let d = 1usize << self.n;
        if m.rows() != d {
            return Err(Error::Dimension(format!(
                "{}-qubit Pauli applied to {} rows",
                self.n,
                m.rows()
            )));
        }
        let mut out = CMat::zeros(d, m.cols());
        for v in 0..d {
            let c = self.coeff(v);
            let r = v ^ self.x as usize;
            for j in 0..m.cols() {
                out.set(r, j, c * m.get(v, j));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PauliElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{p}{}", self.letters())
    }
}

/// Phase convention for [`pauli_group_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PhaseConvention {
    /// Phases ±1, order 2·4ⁿ.
    #[default]
    Real,
    /// Phases ±1, ±i, order 4·4ⁿ.
    Complex,
}

/// An error group together with its index-group and weight bookkeeping.
#[derive(Clone, Debug)]
pub struct NiceErrorBasis {
    qdim: usize,
    nfactors: usize,
    group: FinMatGroup,
    center: Vec<usize>,
    basis_reps: Vec<usize>,
    weights: Vec<usize>,
    paulis: Option<PauliIndex>,
}

#[derive(Clone, Debug)]
struct PauliIndex {
    elems: Vec<PauliElem>,
    lookup: HashMap<PauliElem, usize>,
}

impl NiceErrorBasis {
    pub fn qdim(&self) -> usize {
        self.qdim
    }

    pub fn nfactors(&self) -> usize {
        self.nfactors
    }

    pub fn group(&self) -> &FinMatGroup {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Natural dimension `qdim^nfactors`.
    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn center(&self) -> &[usize] {
        &self.center
    }

    pub fn basis_reps(&self) -> &[usize] {
        &self.basis_reps
    }

    pub fn weight(&self, idx: usize) -> usize {
        self.weights[idx]
    }

    pub fn is_pauli(&self) -> bool {
        self.paulis.is_some()
    }

    pub fn pauli(&self, idx: usize) -> Option<&PauliElem> {
        self.paulis.as_ref().map(|p| &p.elems[idx])
    }

    pub fn index_of_pauli(&self, p: &PauliElem) -> Option<usize> {
        self.paulis.as_ref().and_then(|t| t.lookup.get(p).copied())
    }

    /// Elements of E commuting with every Pauli in `gens`, up to phase.
    /// Errors on a non-Pauli basis.
    pub fn pauli_commutant(&self, gens: &[PauliElem]) -> Result<Vec<usize>> {
        let t = self
            .paulis
            .as_ref()
            .ok_or_else(|| Error::Domain("not a Pauli error group".into()))?;
        if gens.iter().any(|g| g.n() != self.nfactors) {
            return Err(Error::Dimension(
                "generator length differs from the qubit count".into(),
            ));
        }
        Ok((0..t.elems.len())
            .filter(|&i| gens.iter().all(|g| g.commutes(&t.elems[i])))
            .collect())
    }
}

fn weight_lex_key(p: &PauliElem) -> (usize, Vec<u8>) {
    let code = p
        .letters()
        .bytes()
        .map(|c| match c {
            b'I' => 0,
            b'X' => 1,
            b'Y' => 2,
            _ => 3,
        })
        .collect();
    (p.weight(), code)
}

/// The real Pauli group on `n` qubits.
pub fn pauli_group(n: usize) -> Result<NiceErrorBasis> {
    pauli_group_with(n, PhaseConvention::Real)
}

/// Pauli group on `n ≤ 5` qubits. Elements are ordered by weight, then
/// lexicographically in `I < X < Y < Z`, then by phase.
pub fn pauli_group_with(n: usize, conv: PhaseConvention) -> Result<NiceErrorBasis> {
    if n == 0 || n > MAX_PAULI_QUBITS {
        return Err(Error::QubitRange(n));
    }
    let mut strings: Vec<PauliElem> = (0..1u64 << n)
        .flat_map(|x| (0..1u64 << n).map(move |z| PauliElem { n, x, z, phase: 0 }))
        .collect();
    strings.sort_by_key(weight_lex_key);
    let phases: &[u8] = match conv {
        PhaseConvention::Real => &[0, 2],
        PhaseConvention::Complex => &[0, 1, 2, 3],
    };
    let elems: Vec<PauliElem> = strings
        .iter()
        .flat_map(|s| phases.iter().map(move |&ph| PauliElem { phase: ph, ..*s }))
        .collect();
    let lookup: HashMap<PauliElem, usize> =
        elems.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let order = elems.len();
    let mut mul = Vec::with_capacity(order * order);
    for a in &elems {
        for b in &elems {
            mul.push(lookup[&a.mul(b)] as u32);
        }
    }
    let matrices = elems.iter().map(PauliElem::matrix).collect();
    let group = FinMatGroup::from_parts(1 << n, matrices, mul)?;
    let center: Vec<usize> = (0..order).filter(|&i| elems[i].weight() == 0).collect();
    let basis_reps = (0..order).step_by(phases.len()).collect();
    let weights = elems.iter().map(PauliElem::weight).collect();
    Ok(NiceErrorBasis {
        qdim: 2,
        nfactors: n,
        group,
        center,
        basis_reps,
        weights,
        paulis: Some(PauliIndex { elems, lookup }),
    })
}

/// Shift-and-clock basis `X^a Z^b` on one qudit of dimension `d`.
pub fn qudit_pauli(d: usize) -> Result<NiceErrorBasis> {
    if d < 2 {
        return Err(Error::Domain(format!("qudit dimension {d} < 2")));
    }
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    let x = CMat::from_fn(d, d, |i, j| if i == (j + 1) % d { ONE } else { ZERO });
    let z = CMat::diag(&(0..d).map(|j| w.powu(j as u32)).collect::<Vec<_>>());
    let mut mats = Vec::with_capacity(d * d);
    let mut xa = CMat::identity(d);
    for _ in 0..d {
        let mut m = xa.clone();
        for _ in 0..d {
            mats.push(m.clone());
            m = &m * &z;
        }
        xa = &xa * &x;
    }
    from_matrices(d, mats, Tol::default())
}

/// Validates the nice-error-basis axioms on `d²` matrices (identity first)
/// and closes the group they generate.
pub fn from_matrices(d: usize, mats: Vec<CMat>, tol: Tol) -> Result<NiceErrorBasis> {
    let axiom = |axiom: &'static str, detail: String| Error::Axiom { axiom, detail };
    if mats.len() != d * d {
        return Err(axiom(
            "index group order",
            format!("{} matrices for d = {d}", mats.len()),
        ));
    }
    if let Some(k) = mats.iter().position(|m| m.rows() != d || !m.is_square()) {
        return Err(Error::Dimension(format!(
            "basis element {k} is not {d}x{d}"
        )));
    }
    if !mats[0].approx_eq(&CMat::identity(d), 1e-7) {
        return Err(axiom(
            "identity",
            "first basis element is not the identity".into(),
        ));
    }
    let loose = Tol {
        eq_tol: 1e-7,
        ..tol
    };
    if let Some(k) = mats.iter().position(|m| !m.is_unitary(loose)) {
        return Err(axiom(
            "unitary",
            format!("basis element {k} is not unitary"),
        ));
    }
    for (k, m) in mats.iter().enumerate().skip(1) {
        let t = m.trace().norm();
        if t > 1e-7 {
            return Err(axiom(
                "traceless",
                format!("basis element {k} has |trace| = {t:.3e}"),
            ));
        }
    }
    let adj: Vec<CMat> = mats.iter().map(CMat::adjoint).collect();
    let df = d as f64;
    for (i, a) in adj.iter().enumerate() {
        for (j, m) in mats.iter().enumerate().skip(i) {
            let t = (a * m).trace().norm();
            let want = if i == j { df } else { 0.0 };
            if (t - want).abs() > 1e-7 {
                return Err(axiom(
                    "trace orthogonality",
                    format!("|Tr(D{i}† D{j})| = {t:.6}"),
                ));
            }
        }
    }
    for i in 0..mats.len() {
        for j in 0..mats.len() {
            let p = &mats[i] * &mats[j];
            let hit = (0..mats.len()).find_map(|k| {
                let w = (&adj[k] * &p).trace() / df;
                ((w.norm() - 1.0).abs() < 1e-7).then_some((k, w))
            });
            match hit {
                Some((k, w)) if p.approx_eq(&mats[k].scale(w), 1e-7) => {}
                _ => {
                    return Err(axiom(
                        "closure up to phase",
                        format!("D{i}·D{j} is not a phase multiple of a basis element"),
                    ));
                }
            }
        }
    }

    let group = FinMatGroup::close(&mats[1..], 16 * d * d, tol).map_err(|e| match e {
        Error::ClosureOverflow(n) => {
            axiom("phase group cap", format!("closure exceeds {n} elements"))
        }
        other => other,
    })?;
    let center = group.center();
    if group.order() != center.len() * d * d {
        return Err(axiom(
            "index group order",
            format!("|E| = {} but |Z(E)| = {}", group.order(), center.len()),
        ));
    }
    let mut basis_reps = Vec::with_capacity(d * d);
    for (k, m) in mats.iter().enumerate() {
        let idx = group.find(m, loose).ok_or_else(|| {
            Error::Decomposition(format!("basis element {k} missing from its own closure"))
        })?;
        basis_reps.push(idx);
    }
    let is_central = group.membership(&center);
    let weights = (0..group.order())
        .map(|g| usize::from(!is_central[g]))
        .collect();
    Ok(NiceErrorBasis {
        qdim: d,
        nfactors: 1,
        group,
        center,
        basis_reps,
        weights,
        paulis: None,
    })
}

fn parse_complex(tok: &str) -> Option<C64> {
    let t = tok.trim();
    if let Some(body) = t.strip_suffix(['j', 'i']) {
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        match split {
            Some(k) => {
                let re = body[..k].parse().ok()?;
                let im_txt = &body[k..];
                let im = match im_txt {
                    "+" => 1.0,
                    "-" => -1.0,
                    s => s.parse().ok()?,
                };
                Some(C64::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    s => s.parse().ok()?,
                };
                Some(C64::new(0.0, im))
            }
        }
    } else {
        t.parse().ok().map(|re| C64::new(re, 0.0))
    }
}

/// Reads an error-basis file: `d <d>`, optional `m <conductor>`, then `d²`
/// blocks of `d` rows with `d` entries written `re+imj`. `#` starts a comment.
pub fn load_error_basis(path: impl AsRef<Path>) -> Result<NiceErrorBasis> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mats = parse_error_basis(&text, path)?;
    from_matrices(mats[0].rows(), mats, Tol::default())
}

/// Parses the text of an error-basis file into its matrices.
pub fn parse_error_basis(text: &str, path: &Path) -> Result<Vec<CMat>> {
    let mut d: Option<usize> = None;
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match (d, toks[0]) {
            (None, "d") if toks.len() == 2 => {
                let v: usize = toks[1]
                    .parse()
                    .map_err(|_| Error::parse(path, ln + 1, "bad dimension"))?;
                if v < 2 {
                    return Err(Error::parse(path, ln + 1, "dimension must be at least 2"));
                }
                d = Some(v);
            }
            (None, _) => {
                return Err(Error::parse(
                    path,
                    ln + 1,
                    "expected header `d <dimension>`",
                ))
            }
            (Some(_), "m") if rows.is_empty() => {}
            (Some(dv), _) => {
                if toks.len() != dv {
                    return Err(Error::parse(
                        path,
                        ln + 1,
                        format!("expected {dv} entries, found {}", toks.len()),
                    ));
                }
                let row = toks
                    .iter()
                    .map(|t| {
                        parse_complex(t)
                            .ok_or_else(|| Error::parse(path, ln + 1, format!("bad entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push(row);
            }
        }
    }
    let d = d.ok_or_else(|| Error::parse(path, 0, "missing header"))?;
    if rows.len() != d * d * d {
        return Err(Error::parse(
            path,
            0,
            format!("expected {} matrix rows, found {}", d * d * d, rows.len()),
        ));
    }
    Ok(rows.chunks(d).map(CMat::from_rows).collect())
}

/// Writes matrices in the error-basis file format.
pub fn format_error_basis(d: usize, mats: &[CMat], comment: &str) -> String {
    let mut s = String::new();
    for line in comment.lines() {
        s.push_str(&format!("# {line}\n"));
    }
    s.push_str(&format!("d {d}\n"));
    for (k, m) in mats.iter().enumerate() {
        s.push_str(&format!("\n# element {k}\n"));
        for i in 0..d {
            let row: Vec<String> = (0..d).map(|j| fmt_complex(m.get(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
    }
    s
}

fn fmt_complex(z: C64) -> String {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    format!(
        "{re:.15}{}{:.15}j",
        if im < 0.0 { '-' } else { '+' },
        im.abs()
    )
}

pub fn weight(e: &NiceErrorBasis, idx: usize) -> usize {
    e.weight(idx)
}

/// Generators of a stabilizer group, written with Hermitian Pauli letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerSpec {
    n: usize,
    generators: Vec<PauliElem>,
}

impl StabilizerSpec {
    pub fn new(generators: Vec<PauliElem>) -> Result<Self> {
        let n = generators
            .first()
            .map(PauliElem::n)
            .ok_or_else(|| Error::Stabilizer("no generators".into()))?;
        if generators.iter().any(|g| g.n() != n) {
            return Err(Error::Stabilizer("generators of different lengths".into()));
        }
        Ok(StabilizerSpec { n, generators })
    }

    /// One generator per line (or separated by commas/semicolons).
    pub fn parse(text: &str) -> Result<Self> {
        let gens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(|l| l.split([',', ';']))
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(PauliElem::parse_hermitian)
            .collect::<Result<Vec<_>>>()?;
        StabilizerSpec::new(gens)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        StabilizerSpec::parse(&text)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliElem] {
        &self.generators
    }

    /// All elements of the generated group, identity first.
    pub fn group(&self) -> Result<Vec<PauliElem>> {
        for (k, g) in self.generators.iter().enumerate() {
            if g.mul(g) != PauliElem::identity(self.n) {
                return Err(Error::Stabilizer(format!(
                    "generator {k} ({g}) is not Hermitian"
                )));
            }
            for (l, h) in self.generators.iter().enumerate().skip(k + 1) {
                if !g.commutes(h) {
                    return Err(Error::Stabilizer(format!(
                        "anticommuting generators {k} ({g}) and {l} ({h})"
                    )));
                }
            }
        }
        let mut elems = vec![PauliElem::identity(self.n)];
        let mut seen: HashMap<(u64, u64), u8> = HashMap::from([((0, 0), 0)]);
        for g in &self.generators {
            match seen.get(&(g.x, g.z)) {
                Some(&ph) if ph == g.phase => continue,
                Some(_) => {
                    return Err(Error::Stabilizer(format!(
                        "-I lies in the generated group (via {g})"
                    )))
                }
                None => {}
            }
            let new: Vec<PauliElem> = elems.iter().map(|e| e.mul(g)).collect();
            for p in &new {
                if seen.insert((p.x, p.z), p.phase).is_some() {
                    return Err(Error::Stabilizer("-I lies in the generated group".into()));
                }
            }
            elems.extend(new);
        }
        Ok(elems)
    }

    /// Number of independent generators.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.group()?.len().trailing_zeros() as usize)
    }
}

/// Code projector `Π (I + gᵢ)/2`, built as the group average.
pub fn stabilizer_projector(spec: &StabilizerSpec) -> Result<CMat> {
    let group = spec.group()?;
    let d = 1usize << spec.n;
    let w = 1.0 / group.len() as f64;
    let mut p = CMat::zeros(d, d);
    for s in &group {
        for v in 0..d {
            let r = v ^ s.x as usize;
            p.set(r, v, p.get(r, v) + s.coeff(v) * w);
        }
    }
    Ok(p)
}

/// CSS stabilizers: `Z` checks from the rows of `h1`, `X` checks from `h2`.
pub fn css_stabilizer_spec(h1: &[Vec<u8>], h2: &[Vec<u8>]) -> Result<StabilizerSpec> {
    let n = h1
        .iter()
        .chain(h2)
        .map(Vec::len)
        .next()
        .ok_or_else(|| Error::Stabilizer("empty check matrices".into()))?;
    if h1.iter().chain(h2).any(|r| r.len() != n) {
        return Err(Error::Dimension(
            "check matrix rows of different lengths".into(),
        ));
    }
    if h1.iter().chain(h2).flatten().any(|&b| b > 1) {
        return Err(Error::Domain("check matrices must be binary".into()));
    }
    for r1 in h1 {
        for r2 in h2 {
            if r1.iter().zip(r2).map(|(a, b)| (a & b) as u32).sum::<u32>() % 2 != 0 {
                return Err(Error::CssOrthogonality);
            }
        }
    }
    let mut gens = Vec::new();
    let to_bits = |row: &[u8]| {
        row.iter()
            .enumerate()
            .fold(0u64, |acc, (k, &b)| acc | ((b as u64) << (n - 1 - k)))
    };
    for r in h1 {
        let z = to_bits(r);
        if z != 0 {
            gens.push(PauliElem::new(n, 0, z, 0)?);
        }
    }
    for r in h2 {
        let x = to_bits(r);
        if x != 0 {
            gens.push(PauliElem::new(n, x, 0, 0)?);
        }
    }
    if gens.is_empty() {
        gens.push(PauliElem::identity(n));
    }
    StabilizerSpec::new(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn group_orders_and_weight_counts() {
        let e1 = pauli_group(1).unwrap();
        assert_eq!(e1.order(), 8);
        assert_eq!((0..8).filter(|&i| e1.weight(i) == 1).count(), 6);
        let e5 = pauli_group(5).unwrap();
        assert_eq!(e5.order(), 2048);
        assert_eq!((0..2048).filter(|&i| e5.weight(i) == 1).count(), 30);
        assert_eq!((0..2048).filter(|&i| e5.weight(i) == 2).count(), 180);
        assert_eq!(e5.center(), &[0, 1]);
        assert_eq!(
            pauli_group_with(2, PhaseConvention::Complex)
                .unwrap()
                .order(),
            64
        );
        assert!(matches!(pauli_group(0), Err(Error::QubitRange(0))));
        assert!(matches!(pauli_group(6), Err(Error::QubitRange(6))));
    }

    #[test]
    fn ordering_is_weight_then_letters_then_sign() {
        let e = pauli_group(2).unwrap();
        let labels: Vec<String> = (0..8).map(|i| e.pauli(i).unwrap().to_string()).collect();
        assert_eq!(
            labels,
            ["+II", "-II", "+IX", "-IX", "+IY", "-IY", "+IZ", "-IZ"]
        );
        assert_eq!(e.pauli(8).unwrap().to_string(), "+XI");
    }

    #[test]
    fn real_y_is_xz() {
        let y = PauliElem::parse_real("Y").unwrap();
        assert_eq!(y.matrix(), CMat::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]));
        let yh = PauliElem::parse_hermitian("Y").unwrap();
        assert!(yh.matrix().is_hermitian(Tol::default()));
    }

    #[test]
    fn weights_ignore_phase() {
        let e = pauli_group(5).unwrap();
        let p = PauliElem::parse_real("-XZIYI").unwrap();
        assert_eq!(e.weight(e.index_of_pauli(&p).unwrap()), 3);
        assert_eq!(e.weight(0), 0);
        assert_eq!(e.weight(1), 0);
        assert_eq!(
            e.weight(
                e.index_of_pauli(&PauliElem::parse_real("XIIII").unwrap())
                    .unwrap()
            ),
            1
        );
    }

    #[test]
    fn symbolic_product_matches_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=4);
            let r = |rng: &mut ChaCha8Rng| {
                PauliElem::new(
                    n,
                    rng.gen_range(0..1 << n),
                    rng.gen_range(0..1 << n),
                    rng.gen_range(0..4),
                )
                .unwrap()
            };
            let (a, b) = (r(&mut rng), r(&mut rng));
            assert!((&a.matrix() * &b.matrix()).approx_eq(&a.mul(&b).matrix(), 1e-12));
            assert!(a
                .apply(&b.matrix())
                .unwrap()
                .approx_eq(&a.mul(&b).matrix(), 1e-12));
        }
    }

    #[test]
    fn symplectic_commutation_exhaustive() {
        for n in 1..=3 {
            let e = pauli_group(n).unwrap();
            for a in e.basis_reps() {
                for b in e.basis_reps() {
                    let (pa, pb) = (e.pauli(*a).unwrap(), e.pauli(*b).unwrap());
                    let ma = e.group().element(*a);
                    let mb = e.group().element(*b);
                    assert_eq!(pa.commutes(pb), (ma * mb).approx_eq(&(mb * ma), 1e-12));
                }
            }
        }
    }

    #[test]
    fn pauli_group_is_a_nice_error_basis() {
        let e = pauli_group(3).unwrap();
        let reps = e.basis_reps();
        assert_eq!(reps.len(), 64);
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[i..] {
                let t = (&e.group().element(a).adjoint() * e.group().element(b))
                    .trace()
                    .norm();
                assert!((t - if a == b { 8.0 } else { 0.0 }).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn matrix_closure_agrees_with_symbolic_group() {
        for n in 1..=3 {
            let gens: Vec<CMat> = (0..n)
                .flat_map(|k| {
                    let mut x = PauliElem::identity(n);
                    x.x = 1 << k;
                    let mut z = PauliElem::identity(n);
                    z.z = 1 << k;
                    [x.matrix(), z.matrix()]
                })
                .collect();
            let g = FinMatGroup::close(&gens, 8192, Tol::default()).unwrap();
            assert_eq!(g.order(), 2 * 4usize.pow(n as u32));
        }
    }

    #[test]
    fn stabilizer_projector_examples() {
        let t = Tol::default();
        let rep = StabilizerSpec::parse("ZZI\nIZZ").unwrap();
        let p = stabilizer_projector(&rep).unwrap();
        let mut want = CMat::zeros(8, 8);
        want.set(0, 0, ONE);
        want.set(7, 7, ONE);
        assert!(p.approx_eq(&want, 1e-12));
        let five = StabilizerSpec::parse("XZZXI\nIXZZX\nXIXZZ\nZXIXZ").unwrap();
        let p = stabilizer_projector(&five).unwrap();
        assert!(p.is_projector(t).unwrap());
        assert!((p.trace().re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stabilizer_errors() {
        let anti = StabilizerSpec::parse("XI\nZI").unwrap();
        assert!(
            matches!(stabilizer_projector(&anti), Err(Error::Stabilizer(m)) if m.contains("anticommuting"))
        );
        let neg = StabilizerSpec::parse("ZZ\n-ZZ").unwrap();
        assert!(
            matches!(stabilizer_projector(&neg), Err(Error::Stabilizer(m)) if m.contains("-I"))
        );
        // XX·ZZ = -YY with Hermitian Y.
        let clash = StabilizerSpec::parse("XX\nZZ\nYY").unwrap();
        assert!(stabilizer_projector(&clash).is_err());
        let redundant = StabilizerSpec::parse("XX\nZZ\n-YY").unwrap();
        assert!((stabilizer_projector(&redundant).unwrap().trace().re - 1.0).abs() < 1e-12);
        let real_y = StabilizerSpec::new(vec![PauliElem::parse_real("YI").unwrap()]).unwrap();
        assert!(
            matches!(stabilizer_projector(&real_y), Err(Error::Stabilizer(m)) if m.contains("Hermitian"))
        );
    }

    #[test]
    fn css_examples() {
        let hamming = vec![
            vec![1, 0, 1, 0, 1, 0, 1],
            vec![0, 1, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        let steane = css_stabilizer_spec(&hamming, &hamming).unwrap();
        assert!((stabilizer_projector(&steane).unwrap().trace().re - 2.0).abs() < 1e-9);
        let two = css_stabilizer_spec(&[vec![1, 1]], &[vec![1, 1]]).unwrap();
        assert!((stabilizer_projector(&two).unwrap().trace().re - 1.0).abs() < 1e-12);
        let rep = css_stabilizer_spec(&[vec![1, 1, 0], vec![0, 1, 1]], &[]).unwrap();
        assert!((stabilizer_projector(&rep).unwrap().trace().re - 2.0).abs() < 1e-12);
        assert!(matches!(
            css_stabilizer_spec(&[vec![1, 0]], &[vec![1, 1]]),
            Err(Error::CssOrthogonality)
        ));
    }

    #[test]
    fn complex_entry_parser() {
        assert_eq!(parse_complex("1"), Some(ONE));
        assert_eq!(parse_complex("0.5+0.5j"), Some(C64::new(0.5, 0.5)));
        assert_eq!(parse_complex("-0.5-1e-3j"), Some(C64::new(-0.5, -1e-3)));
        assert_eq!(parse_complex("1e-3+2E-2j"), Some(C64::new(1e-3, 2e-2)));
        assert_eq!(parse_complex("-j"), Some(C64::new(0.0, -1.0)));
        assert_eq!(parse_complex("2.5j"), Some(C64::new(0.0, 2.5)));
        assert_eq!(parse_complex("abc"), None);
    }

    #[test]
    fn basis_file_round_trip_and_axioms() {
        let dir = tempfile::tempdir().unwrap();
        let x = CMat::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = CMat::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let y = &x * &z;
        let good = dir.path().join("pauli.txt");
        std::fs::write(
            &good,
            format_error_basis(
                2,
                &[CMat::identity(2), x.clone(), y, z.clone()],
                "d=2 Pauli",
            ),
        )
        .unwrap();
        let e = load_error_basis(&good).unwrap();
        assert_eq!(e.order(), 8);
        assert_eq!(e.center().len(), 2);
        assert_eq!(e.basis_reps().len(), 4);
        assert_eq!((0..8).filter(|&g| e.weight(g) == 1).count(), 6);

        let bad = dir.path().join("bad.txt");
        let h = CMat::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]);
        std::fs::write(
            &bad,
            format_error_basis(2, &[CMat::identity(2), x, h, z], ""),
        )
        .unwrap();
        match load_error_basis(&bad) {
            Err(Error::Axiom { axiom, .. }) => assert!(axiom == "unitary" || axiom == "traceless"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn traceless_axiom_named() {
        let mats = vec![
            CMat::identity(2),
            CMat::identity(2),
            CMat::identity(2),
            CMat::identity(2),
        ];
        match from_matrices(2, mats, Tol::default()) {
            Err(Error::Axiom { axiom, .. }) => assert_eq!(axiom, "traceless"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn qudit_bases() {
        let e3 = qudit_pauli(3).unwrap();
        assert_eq!(e3.order(), 27);
        assert_eq!(e3.center().len(), 3);
        assert_eq!(qudit_pauli(2).unwrap().order(), 8);
    }
}
