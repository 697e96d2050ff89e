//! Scenario files, the assignment search, table output and golden diffs.
//!
//! A scenario file is INI-style, one `[section]` per scenario:
//!
//! ```text
//! [five_qubit_pairs]
//! error_group = pauli:5
//! subgroup = centralizer:../stabilizers/five_qubit.stab
//! slots = 0 1
//! values = O2 PZ- PX- PX+ PY+ PY- PZ+ I2
//! seed = 1374109709
//! golden = ../golden/five_qubit_pairs.csv
//! ```
//!
//! Paths are relative to the scenario file. `slots` index constituents in
//! their canonical (dimension, character) order.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::codes::{self, Flags, MinDistance};
use crate::cxla::{CMat, C64, I, ONE, ZERO};
use crate::errbasis::{self, NiceErrorBasis, StabilizerSpec};
use crate::error::{Error, Result};
use crate::fourier::TransformAssignment;
use crate::repn::{self, ConstituentSet};

/// The eight 2×2 transform values: zero, identity and the six rank-one
/// Pauli eigenprojectors `(I ± W)/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    O2,
    PZm,
    PXm,
    PXp,
    PYp,
    PYm,
    PZp,
    I2,
}

/// Enumeration order of the value set; rows come out lexicographic in it.
pub const TABLE_ORDER: [Component; 8] = [
    Component::O2,
    Component::PZm,
    Component::PXm,
    Component::PXp,
    Component::PYp,
    Component::PYm,
    Component::PZp,
    Component::I2,
];

impl Component {
    pub fn label(self) -> &'static str {
        match self {
            Component::O2 => "O2",
            Component::I2 => "I2",
            Component::PXp => "PX+",
            Component::PXm => "PX-",
            Component::PYp => "PY+",
            Component::PYm => "PY-",
            Component::PZp => "PZ+",
            Component::PZm => "PZ-",
        }
    }

    pub fn matrix(self) -> CMat {
        let h = C64::new(0.5, 0.0);
        let (a, b, c, d) = match self {
            Component::O2 => (ZERO, ZERO, ZERO, ZERO),
            Component::I2 => (ONE, ZERO, ZERO, ONE),
            Component::PZp => (ONE, ZERO, ZERO, ZERO),
            Component::PZm => (ZERO, ZERO, ZERO, ONE),
            Component::PXp => (h, h, h, h),
            Component::PXm => (h, -h, -h, h),
            Component::PYp => (h, -I * h, I * h, h),
            Component::PYm => (h, I * h, -I * h, h),
        };
        CMat::from_rows(&[vec![a, b], vec![c, d]])
    }

    pub fn is_zero(self) -> bool {
        self == Component::O2
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Component {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TABLE_ORDER
            .iter()
            .copied()
            .find(|c| c.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Scenario(format!("unknown transform value {s:?}")))
    }
}

/// Parses `"PZ-,I2"` (commas or whitespace).
pub fn parse_labels(s: &str) -> Result<Vec<Component>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSource {
    Pauli(usize),
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupRecipe {
    /// Centralizer in a Pauli group of the generators in a stabilizer file.
    Centralizer(PathBuf),
    /// Subgroup generated by the listed element indices.
    Generators(Vec<usize>),
    /// Entry of `FinMatGroup::normal_subgroups`.
    Normal(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: String,
    pub group: GroupSource,
    pub subgroup: SubgroupRecipe,
    pub slots: Vec<usize>,
    pub values: Vec<Component>,
    pub seed: u64,
    pub golden: Option<PathBuf>,
}

/// Error group and constituents of a scenario, ready for analysis.
pub struct Prepared {
    pub basis: NiceErrorBasis,
    pub constituents: ConstituentSet,
}

fn scenario_err(name: &str, msg: impl fmt::Display) -> Error {
    Error::Scenario(format!("[{name}] {msg}"))
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Vec<Scenario>> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        Scenario::parse(&text, dir, path)
    }

    /// One named section, or the only one when `name` is `None`.
    pub fn load_section(path: impl AsRef<Path>, name: Option<&str>) -> Result<Scenario> {
        let all = Scenario::load(path)?;
        match name {
            Some(n) => all
                .into_iter()
                .find(|s| s.name == n)
                .ok_or_else(|| Error::Scenario(format!("no section [{n}]"))),
            None if all.len() == 1 => Ok(all.into_iter().next().expect("one")),
            None => Err(Error::Scenario(format!(
                "{} sections; pick one of {}",
                all.len(),
                all.iter()
                    .map(|s| s.name.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))),
        }
    }

    pub fn parse(text: &str, base_dir: &Path, path: &Path) -> Result<Vec<Scenario>> {
        let conf = ini::Ini::load_from_str(text)
            .map_err(|e| Error::parse(path, e.line, e.msg.to_string()))?;
        let mut out = Vec::new();
        for (section, props) in conf.iter() {
            let Some(name) = section else {
                if props.iter().next().is_some() {
                    return Err(Error::Scenario("keys outside any [section]".into()));
                }
                continue;
            };
            let need = |k: &str| {
                props
                    .get(k)
                    .ok_or_else(|| scenario_err(name, format!("missing key {k}")))
            };
            for (k, _) in props.iter() {
                if ![
                    "error_group",
                    "subgroup",
                    "slots",
                    "values",
                    "seed",
                    "golden",
                ]
                .contains(&k)
                {
                    return Err(scenario_err(name, format!("unknown key {k}")));
                }
            }
            let group = match need("error_group")?.split_once(':') {
                Some(("pauli", n)) => GroupSource::Pauli(
                    n.trim()
                        .parse()
                        .map_err(|_| scenario_err(name, "bad qubit count"))?,
                ),
                Some(("file", p)) => GroupSource::File(base_dir.join(p.trim())),
                _ => {
                    return Err(scenario_err(
                        name,
                        "error_group must be pauli:<n> or file:<path>",
                    ))
                }
            };
            let ints = |s: &str| -> Result<Vec<usize>> {
                s.split_whitespace()
                    .map(|t| {
                        t.parse()
                            .map_err(|_| scenario_err(name, format!("bad integer {t:?}")))
                    })
                    .collect()
            };
            let subgroup = match need("subgroup")?.split_once(':') {
                Some(("centralizer", p)) => SubgroupRecipe::Centralizer(base_dir.join(p.trim())),
                Some(("generators", g)) => SubgroupRecipe::Generators(ints(g)?),
                Some(("normal", k)) => SubgroupRecipe::Normal(
                    k.trim()
                        .parse()
                        .map_err(|_| scenario_err(name, "bad normal index"))?,
                ),
                _ => {
                    return Err(scenario_err(
                        name,
                        "subgroup must be centralizer:, generators: or normal:",
                    ))
                }
            };
            let slots = ints(need("slots")?)?;
            let values = match props.get("values") {
                Some(v) => parse_labels(v)?,
                None => TABLE_ORDER.to_vec(),
            };
            let seed = match props.get("seed") {
                Some(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| scenario_err(name, "bad seed"))?,
                None => repn::DEFAULT_SEED,
            };
            let golden = props.get("golden").map(|p| base_dir.join(p.trim()));
            let s = Scenario {
                name: name.to_string(),
                group,
                subgroup,
                slots,
                values,
                seed,
                golden,
            };
            s.check()?;
            out.push(s);
        }
        if out.is_empty() {
            return Err(Error::Scenario(format!("{}: no scenarios", path.display())));
        }
        Ok(out)
    }

    fn check(&self) -> Result<()> {
        if self.slots.is_empty() {
            return Err(scenario_err(&self.name, "at least one slot is required"));
        }
        if self.slots.iter().collect::<BTreeSet<_>>().len() != self.slots.len() {
            return Err(scenario_err(&self.name, "slots repeat a constituent"));
        }
        if self.values.is_empty() {
            return Err(scenario_err(&self.name, "empty value set"));
        }
        Ok(())
    }

    pub fn with_slots(&self, slots: Vec<usize>) -> Scenario {
        Scenario {
            slots,
            ..self.clone()
        }
    }

    /// Builds the error group, the subgroup and its decomposition.
    pub fn prepare(&self) -> Result<Prepared> {
        self.check()?;
        let basis = match &self.group {
            GroupSource::Pauli(n) => errbasis::pauli_group(*n)?,
            GroupSource::File(p) => errbasis::load_error_basis(p)?,
        };
        let sub = match &self.subgroup {
            SubgroupRecipe::Centralizer(p) => {
                if !basis.is_pauli() {
                    return Err(scenario_err(
                        &self.name,
                        "centralizer recipes need a Pauli error group",
                    ));
                }
                let spec = StabilizerSpec::from_file(p)?;
                basis.pauli_commutant(spec.generators())?
            }
            SubgroupRecipe::Generators(g) => {
                if let Some(&bad) = g.iter().find(|&&i| i >= basis.order()) {
                    return Err(Error::BadIndex(bad));
                }
                basis.group().subgroup_from(g)?
            }
            SubgroupRecipe::Normal(k) => basis
                .group()
                .normal_subgroups()
                .into_iter()
                .nth(*k)
                .ok_or_else(|| scenario_err(&self.name, format!("no normal subgroup #{k}")))?,
        };
        let constituents = repn::decompose_with_seed(basis.group(), &sub, self.seed)?;
        for &s in &self.slots {
            if s >= constituents.len() {
                return Err(scenario_err(
                    &self.name,
                    format!("slot {s} but only {} constituents", constituents.len()),
                ));
            }
            if constituents.get(s).dim_irr != 2 {
                return Err(scenario_err(
                    &self.name,
                    format!("constituent {s} is not two-dimensional"),
                ));
            }
        }
        Ok(Prepared {
            basis,
            constituents,
        })
    }
}

/// One analyzed assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub sl: usize,
    pub labels: Vec<Component>,
    pub flags: Flags,
    pub dim: usize,
    pub detectable: usize,
    pub wt1: Option<usize>,
    pub wt2: Option<usize>,
    pub distance: MinDistance,
}

pub const COLUMNS: [&str; 9] = [
    "sl",
    "components",
    "is_clifford",
    "in_a",
    "dim",
    "detectable",
    "wt1",
    "wt2",
    "distance",
];

const HEADER: [&str; 9] = [
    "Sl.",
    "Transform components",
    "Is Clifford code of S?",
    "In A(S)?",
    "Dimension",
    "Size of detectable set",
    "Wt. 1 errors",
    "Wt. 2 errors",
    "Minimum distance",
];

pub type Cells = [String; 9];

fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

impl Row {
    pub fn components(&self) -> String {
        self.labels
            .iter()
            .map(|c| c.label())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn cells(&self) -> Cells {
        [
            self.sl.to_string(),
            self.components(),
            yes_no(self.flags.is_clifford_of_s),
            yes_no(self.flags.in_a_of_s),
            self.dim.to_string(),
            self.detectable.to_string(),
            opt(self.wt1),
            opt(self.wt2),
            self.distance.to_string(),
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub rows: Vec<Row>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            _ => Err(Error::Scenario(format!("unknown format {s:?}"))),
        }
    }
}

impl Table {
    pub fn cells(&self) -> Vec<Cells> {
        self.rows.iter().map(Row::cells).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(HEADER).expect("in-memory write");
        for c in self.cells() {
            w.write_record(&c).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Pipe table with an extra column for the all-identity Clifford reading.
    pub fn to_markdown(&self) -> String {
        let mut head: Vec<&str> = HEADER.to_vec();
        head.push("Clifford (all-I reading)");
        let mut s = format!("| {} |\n|{}\n", head.join(" | "), "---|".repeat(head.len()));
        for r in &self.rows {
            let mut c = r.cells().to_vec();
            c[1] = format!(
                "({})",
                r.labels
                    .iter()
                    .map(|l| l.label())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            c.push(yes_no(r.flags.is_clifford_table_convention));
            s.push_str(&format!("| {} |\n", c.join(" | ")));
        }
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Markdown => self.to_markdown(),
        }
    }
}

pub fn emit(table: &Table, format: Format, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, table.render(format)).map_err(|e| Error::io(path, e))
}

/// Analyzes one assignment of values to the scenario's slots.
pub fn analyze_row(prep: &Prepared, slots: &[usize], labels: &[Component]) -> Result<Row> {
    if slots.len() != labels.len() {
        return Err(Error::Scenario(format!(
            "{} slots but {} values",
            slots.len(),
            labels.len()
        )));
    }
    let assign = TransformAssignment::new(
        slots
            .iter()
            .zip(labels)
            .map(|(&s, c)| (s, c.matrix()))
            .collect(),
    );
    let a = codes::analyze(&assign, &prep.constituents, &prep.basis)?;
    let count = |w: usize| {
        prep.basis
            .is_pauli()
            .then(|| a.wt_detect.get(&w).map_or(0, |c| c.detected))
    };
    Ok(Row {
        sl: 0,
        labels: labels.to_vec(),
        flags: a.flags,
        dim: a.dim_code,
        detectable: a.detectable.len(),
        wt1: count(1),
        wt2: count(2),
        distance: a.min_distance,
    })
}

/// Every non-zero tuple of `values^slots`, first slot most significant.
pub fn assignments(values: &[Component], slots: usize) -> Vec<Vec<Component>> {
    let mut out = Vec::new();
    let total = values.len().pow(slots as u32);
    for mut k in 0..total {
        let mut t = vec![values[0]; slots];
        for pos in (0..slots).rev() {
            t[pos] = values[k % values.len()];
            k /= values.len();
        }
        if !t.iter().all(|c| c.is_zero()) {
            out.push(t);
        }
    }
    out
}

pub fn run_prepared(s: &Scenario, prep: &Prepared) -> Result<Table> {
    let tuples = assignments(&s.values, s.slots.len());
    let mut rows = tuples
        .par_iter()
        .map(|t| analyze_row(prep, &s.slots, t))
        .collect::<Result<Vec<_>>>()?;
    for (k, r) in rows.iter_mut().enumerate() {
        r.sl = k + 1;
    }
    Ok(Table { rows })
}

pub fn run_scenario(s: &Scenario) -> Result<Table> {
    run_prepared(s, &s.prepare()?)
}

/// Table read back from CSV, with the cells a golden file marks as known
/// discrepancies (`# documented: <sl> <column>` lines).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvTable {
    pub rows: Vec<Cells>,
    pub documented: BTreeSet<(String, usize)>,
}

impl CsvTable {
    pub fn from_table(t: &Table) -> Self {
        CsvTable {
            rows: t.cells(),
            documented: BTreeSet::new(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        CsvTable::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut documented = BTreeSet::new();
        for (ln, line) in text.lines().enumerate() {
            let Some(rest) = line.trim().strip_prefix("# documented:") else {
                continue;
            };
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let col = match parts.as_slice() {
                [_, c] => COLUMNS.iter().position(|k| k == c),
                _ => None,
            };
            match col {
                Some(col) => {
                    documented.insert((parts[0].to_string(), col));
                }
                None => {
                    return Err(Error::parse(
                        path,
                        ln + 1,
                        "expected `# documented: <sl> <column>`",
                    ))
                }
            }
        }
        let mut rd = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let width = rd
            .headers()
            .map_err(|e| Error::parse(path, 1, e.to_string()))?
            .len();
        if width != 9 {
            return Err(Error::parse(
                path,
                1,
                format!("expected 9 columns, found {width}"),
            ));
        }
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                Error::parse(path, line, e.to_string())
            })?;
            let cells: Vec<String> = rec.iter().map(|c| c.trim().to_string()).collect();
            rows.push(cells.try_into().expect("csv enforces equal widths"));
        }
        Ok(CsvTable { rows, documented })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDiff {
    pub row: String,
    pub column: &'static str,
    pub produced: String,
    pub expected: String,
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "row {} column {}: produced {:?}, expected {:?}",
            self.row, self.column, self.produced, self.expected
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffStatus {
    Exact,
    DocumentedOnly,
    Hard,
}

impl DiffStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            DiffStatus::Exact => 0,
            DiffStatus::Hard => 1,
            DiffStatus::DocumentedOnly => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DiffReport {
    pub compared: usize,
    pub documented: Vec<CellDiff>,
    pub hard: Vec<CellDiff>,
}

impl DiffReport {
    pub fn status(&self) -> DiffStatus {
        if !self.hard.is_empty() {
            DiffStatus::Hard
        } else if !self.documented.is_empty() {
            DiffStatus::DocumentedOnly
        } else {
            DiffStatus::Exact
        }
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} cells compared, {} documented discrepancies, {} hard mismatches",
            self.compared,
            self.documented.len(),
            self.hard.len()
        )?;
        for d in &self.documented {
            writeln!(f, "  documented: {d}")?;
        }
        for d in &self.hard {
            writeln!(f, "  MISMATCH: {d}")?;
        }
        Ok(())
    }
}

/// Cell-by-cell comparison, rows matched on the serial-number column.
pub fn golden_diff(produced: &[Cells], golden: &CsvTable) -> DiffReport {
    let mut rep = DiffReport::default();
    let missing = |row: &str, produced: &str, expected: &str| CellDiff {
        row: row.to_string(),
        column: COLUMNS[0],
        produced: produced.to_string(),
        expected: expected.to_string(),
    };
    for g in &golden.rows {
        let Some(p) = produced.iter().find(|p| p[0] == g[0]) else {
            rep.hard.push(missing(&g[0], "(missing)", &g[0]));
            continue;
        };
        for col in 1..9 {
            rep.compared += 1;
            if p[col] == g[col] {
                continue;
            }
            let d = CellDiff {
                row: g[0].clone(),
                column: COLUMNS[col],
                produced: p[col].clone(),
                expected: g[col].clone(),
            };
            if golden.documented.contains(&(g[0].clone(), col)) {
                rep.documented.push(d);
            } else {
                rep.hard.push(d);
            }
        }
    }
    for p in produced {
        if !golden.rows.iter().any(|g| g[0] == p[0]) {
            rep.hard.push(missing(&p[0], &p[0], "(absent)"));
        }
    }
    rep
}

/// Hard-mismatch count of every ordered pair of two-dimensional
/// constituents, best first.
pub fn search_pairs(
    s: &Scenario,
    prep: &Prepared,
    golden: &CsvTable,
) -> Result<Vec<((usize, usize), usize)>> {
    let two: Vec<usize> = (0..prep.constituents.len())
        .filter(|&i| prep.constituents.get(i).dim_irr == 2)
        .collect();
    let pairs: Vec<(usize, usize)> = two
        .iter()
        .flat_map(|&a| two.iter().filter(move |&&b| b != a).map(move |&b| (a, b)))
        .collect();
    let mut scored = pairs
        .par_iter()
        .map(|&(a, b)| {
            let t = run_prepared(&s.with_slots(vec![a, b]), prep)?;
            Ok(((a, b), golden_diff(&t.cells(), golden).hard.len()))
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by_key(|&(p, k)| (k, p));
    Ok(scored)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxla::Tol;

    #[test]
    fn component_set_properties() {
        let t = Tol::default();
        for c in TABLE_ORDER {
            let m = c.matrix();
            assert!(m.is_hermitian(t));
            assert!(m.is_projector(t).unwrap(), "{c}");
            assert_eq!(c.label().parse::<Component>().unwrap(), c);
        }
        let i2 = CMat::identity(2);
        for (p, q) in [
            (Component::PXp, Component::PXm),
            (Component::PYp, Component::PYm),
            (Component::PZp, Component::PZm),
        ] {
            assert!((&p.matrix() + &q.matrix()).approx_eq(&i2, 1e-15));
            assert!((p.matrix().trace() - 1.0).norm() < 1e-15);
        }
        assert!("PQ+".parse::<Component>().is_err());
    }

    #[test]
    fn tuple_enumeration() {
        let t = assignments(&TABLE_ORDER, 2);
        assert_eq!(t.len(), 63);
        assert_eq!(t[0], vec![Component::O2, Component::PZm]);
        assert_eq!(t[6], vec![Component::O2, Component::I2]);
        assert_eq!(t[62], vec![Component::I2, Component::I2]);
        assert_eq!(assignments(&TABLE_ORDER, 1).len(), 7);
        assert_eq!(assignments(&TABLE_ORDER[..3], 3).len(), 26);
        assert!(assignments(&[Component::O2], 1).is_empty());
    }

    const SCN: &str = "[a]\nerror_group = pauli:2\nsubgroup = generators: 2 5\nslots = 0\n\n[b]\nerror_group = file:x.basis\nsubgroup = normal:3\nslots = 1 2\nvalues = O2, I2\nseed = 7\ngolden = g.csv\n";

    #[test]
    fn scenario_parsing() {
        let s = Scenario::parse(SCN, Path::new("/d"), Path::new("s.ini")).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].group, GroupSource::Pauli(2));
        assert_eq!(s[0].subgroup, SubgroupRecipe::Generators(vec![2, 5]));
        assert_eq!(s[0].values, TABLE_ORDER.to_vec());
        assert_eq!(s[0].seed, repn::DEFAULT_SEED);
        assert_eq!(s[1].group, GroupSource::File(PathBuf::from("/d/x.basis")));
        assert_eq!(s[1].subgroup, SubgroupRecipe::Normal(3));
        assert_eq!(s[1].values, vec![Component::O2, Component::I2]);
        assert_eq!(s[1].golden, Some(PathBuf::from("/d/g.csv")));
        for bad in [
            "[a]\nerror_group = pauli:2\nsubgroup = normal:0\nslots =\n",
            "[a]\nerror_group = pauli:2\nsubgroup = normal:0\nslots = 1 1\n",
            "[a]\nerror_group = qudit:2\nsubgroup = normal:0\nslots = 1\n",
            "[a]\nerror_group = pauli:2\nsubgroup = normal:0\nslots = 1\ncolour = red\n",
            "[a]\nerror_group = pauli:2\nslots = 1\n",
            "k = v\n",
        ] {
            assert!(
                Scenario::parse(bad, Path::new("."), Path::new("s.ini")).is_err(),
                "{bad}"
            );
        }
    }

    #[test]
    fn single_slot_zero_value_gives_empty_table() {
        let s = Scenario {
            name: "z".into(),
            group: GroupSource::Pauli(1),
            subgroup: SubgroupRecipe::Generators(vec![0]),
            slots: vec![0],
            values: vec![Component::O2],
            seed: 1,
            golden: None,
        };
        let prep = Prepared {
            basis: errbasis::pauli_group(1).unwrap(),
            constituents: repn::decompose_with_seed(
                errbasis::pauli_group(1).unwrap().group(),
                &[0],
                1,
            )
            .unwrap(),
        };
        let t = run_prepared(&s, &prep).unwrap();
        assert!(t.rows.is_empty());
        let csv = t.to_csv();
        assert_eq!(csv.lines().count(), 1);
        assert_eq!(CsvTable::parse(&csv, Path::new("x")).unwrap().rows.len(), 0);
    }

    fn sample() -> Table {
        Table {
            rows: vec![Row {
                sl: 1,
                labels: vec![Component::O2, Component::PZm],
                flags: Flags {
                    is_clifford_of_s: false,
                    in_a_of_s: true,
                    is_clifford_table_convention: false,
                },
                dim: 1,
                detectable: 2048,
                wt1: Some(30),
                wt2: Some(180),
                distance: MinDistance::Weight(6),
            }],
        }
    }

    #[test]
    fn csv_round_trip_and_diff() {
        let t = sample();
        let csv = t.to_csv();
        assert!(csv.contains("1,\"O2,PZ-\",No,Yes,1,2048,30,180,6"));
        let back = CsvTable::parse(&csv, Path::new("x")).unwrap();
        assert_eq!(back.rows, t.cells());
        let rep = golden_diff(&t.cells(), &back);
        assert_eq!(rep.status(), DiffStatus::Exact);
        assert_eq!(rep.compared, 8);

        let mut perturbed = t.cells();
        perturbed[0][4] = "2".into();
        let rep = golden_diff(&perturbed, &back);
        assert_eq!(rep.status(), DiffStatus::Hard);
        assert_eq!(rep.hard[0].column, "dim");
        assert_eq!(rep.hard[0].row, "1");

        let with_doc =
            CsvTable::parse(&format!("# documented: 1 dim\n{csv}"), Path::new("x")).unwrap();
        let rep = golden_diff(&perturbed, &with_doc);
        assert_eq!(rep.status(), DiffStatus::DocumentedOnly);
        assert_eq!(rep.status().exit_code(), 2);
        assert!(CsvTable::parse("a,b\n1,2\n", Path::new("x")).is_err());
        assert!(
            CsvTable::parse(&format!("# documented: 1 colour\n{csv}"), Path::new("x")).is_err()
        );
    }

    #[test]
    fn markdown_layout() {
        let md = sample().to_markdown();
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("| 1 | (O2, PZ-) | No | Yes | 1 | 2048 | 30 | 180 | 6 | No |"));
    }
}
