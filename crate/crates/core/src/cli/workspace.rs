//! Workspace documents: JSON files naming algebras, maps, actions and
//! extensions over one field.
//!
//! Scalars are strings in canonical form (`"p/q"` in lowest terms with
//! `q > 0`, or residues in `[0, p)`). Basis indices are zero-based. Brackets
//! and cocycle values are listed for `i < j` only.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::marker::PhantomData;
use std::sync::Arc;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohom::{self, Cochain};
use crate::error::Error;
use crate::exactlin::{Field, Matrix, Scalar};
use crate::extension::{self, ExtensionData};
use crate::liealg::{AlgebraMap, LieAlgebra};
use crate::modact::ModuleAction;

/// A JSON object whose keys must be distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniqueMap<V>(pub BTreeMap<String, V>);

impl<V> Default for UniqueMap<V> {
    fn default() -> Self {
        UniqueMap(BTreeMap::new())
    }
}

impl<V> UniqueMap<V> {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<V: Serialize> Serialize for UniqueMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V2<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V2<V> {
            type Value = UniqueMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with distinct keys")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> Result<Self::Value, M::Error> {
                let mut out = BTreeMap::new();
                while let Some(k) = m.next_key::<String>()? {
                    if out.contains_key(&k) {
                        return Err(de::Error::custom(format!("duplicate key {k:?}")));
                    }
                    let v = m.next_value()?;
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(V2(PhantomData))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FieldDoc {
    Q,
    GF { p: u64 },
}

impl FieldDoc {
    pub fn of(field: Field) -> Self {
        match field.modulus() {
            None => FieldDoc::Q,
            Some(p) => FieldDoc::GF { p },
        }
    }
}

pub type MatrixDoc = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketDoc {
    pub i: usize,
    pub j: usize,
    pub coeffs: UniqueMap<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub dim: usize,
    /// Empty means `e1..en`.
    #[serde(default)]
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub brackets: Vec<BracketDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub from: String,
    pub to: String,
    pub matrix: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDoc {
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "A")]
    pub a: String,
    pub rho: Vec<MatrixDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CochainEntryDoc {
    pub i: usize,
    pub j: usize,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FromCocycleDoc {
    pub action: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<CochainEntryDoc>,
}

/// Either `{"L", "inj", "proj", "sect"?}` or `{"from_cocycle"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inj: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proj: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sect: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_cocycle: Option<FromCocycleDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub field: FieldDoc,
    #[serde(default, skip_serializing_if = "UniqueMap::is_empty")]
    pub algebras: UniqueMap<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "UniqueMap::is_empty")]
    pub maps: UniqueMap<MapDoc>,
    #[serde(default, skip_serializing_if = "UniqueMap::is_empty")]
    pub actions: UniqueMap<ActionDoc>,
    #[serde(default, skip_serializing_if = "UniqueMap::is_empty")]
    pub extensions: UniqueMap<ExtensionDoc>,
}

/// A standalone matrix file: `{"field": ..., "matrix": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub field: FieldDoc,
    pub matrix: MatrixDoc,
}

/// Structural failure: the file cannot be read as a workspace at all.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{object}: {message}")]
    Invalid { object: String, message: String },
}

fn invalid(object: &str, message: impl fmt::Display) -> LoadError {
    LoadError::Invalid { object: object.to_string(), message: message.to_string() }
}

/// A named object that failed its mathematical checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Problem {
    pub object: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Vec<usize>>,
}

/// A parsed workspace. Only objects passing their checkers are resolved;
/// the rest are listed in `problems`.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub document: Document,
    pub field: Field,
    pub algebras: BTreeMap<String, Arc<LieAlgebra>>,
    pub maps: BTreeMap<String, AlgebraMap>,
    pub actions: BTreeMap<String, Arc<ModuleAction>>,
    pub extensions: BTreeMap<String, ExtensionData>,
    pub problems: Vec<Problem>,
}

impl Workspace {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }

    /// Every named object, section by section.
    pub fn object_names(&self) -> Vec<(&'static str, String)> {
        let d = &self.document;
        let mut out = Vec::new();
        out.extend(d.algebras.0.keys().map(|n| ("algebra", n.clone())));
        out.extend(d.maps.0.keys().map(|n| ("map", n.clone())));
        out.extend(d.actions.0.keys().map(|n| ("action", n.clone())));
        out.extend(d.extensions.0.keys().map(|n| ("extension", n.clone())));
        out
    }
}

pub fn parse_field(doc: &FieldDoc) -> Result<Field, LoadError> {
    match doc {
        FieldDoc::Q => Ok(Field::Rationals),
        FieldDoc::GF { p } => Field::prime(*p).map_err(|e| invalid("field", e)),
    }
}

fn parse_scalar(field: Field, object: &str, text: &str) -> Result<Scalar, LoadError> {
    field.parse(text).map_err(|e| invalid(object, e))
}

pub fn parse_matrix(
    field: Field,
    object: &str,
    rows: usize,
    cols: usize,
    doc: &MatrixDoc,
) -> Result<Matrix, LoadError> {
    if doc.len() != rows {
        return Err(invalid(object, format!("matrix has {} rows, expected {rows}", doc.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for (r, row) in doc.iter().enumerate() {
        if row.len() != cols {
            return Err(invalid(object, format!("matrix row {r} has {} entries, expected {cols}", row.len())));
        }
        out.push(row.iter().map(|s| parse_scalar(field, object, s)).collect::<Result<Vec<_>, _>>()?);
    }
    if rows == 0 {
        return Ok(Matrix::zeros(field, 0, cols));
    }
    Matrix::from_rows(field, out).map_err(|e| invalid(object, e))
}

fn parse_vector(field: Field, object: &str, len: usize, doc: &[String]) -> Result<Vec<Scalar>, LoadError> {
    if doc.len() != len {
        return Err(invalid(object, format!("vector has {} entries, expected {len}", doc.len())));
    }
    doc.iter().map(|s| parse_scalar(field, object, s)).collect()
}

/// Dimension and field errors are structural; everything else is a checker
/// failure.
fn is_structural(e: &Error) -> bool {
    matches!(
        e,
        Error::DimensionMismatch { .. }
            | Error::NotSquare { .. }
            | Error::FieldMismatch { .. }
            | Error::InvalidBracket { .. }
            | Error::ParseScalar { .. }
    )
}

fn fmt_vector(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

struct Loader {
    field: Field,
    failed: BTreeSet<String>,
    problems: Vec<Problem>,
}

impl Loader {
    fn problem(&mut self, object: &str, message: impl fmt::Display, location: Option<Vec<usize>>) {
        self.failed.insert(object.to_string());
        self.problems.push(Problem { object: object.to_string(), message: message.to_string(), location });
    }

    /// `Ok(None)` when the reference points at an object that failed its checker.
    fn resolve<'a, T>(
        &mut self,
        object: &str,
        kind: &str,
        name: &str,
        table: &'a BTreeMap<String, T>,
    ) -> Result<Option<&'a T>, LoadError> {
        if let Some(t) = table.get(name) {
            return Ok(Some(t));
        }
        if self.failed.contains(name) {
            self.problem(object, format!("depends on invalid {kind} {name:?}"), None);
            return Ok(None);
        }
        Err(invalid(object, format!("unknown {kind} {name:?}")))
    }

    fn algebra(&mut self, name: &str, doc: &AlgebraDoc) -> Result<Option<LieAlgebra>, LoadError> {
        let n = doc.dim;
        let labels =
            if doc.labels.is_empty() { (1..=n).map(|i| format!("e{i}")).collect() } else { doc.labels.clone() };
        if labels.len() != n {
            return Err(invalid(name, format!("{} labels for dimension {n}", doc.labels.len())));
        }
        let mut seen = BTreeSet::new();
        let mut brackets = Vec::new();
        for b in &doc.brackets {
            if !(b.i < b.j && b.j < n) {
                return Err(invalid(name, format!("bracket ({}, {}) must satisfy i < j < {n}", b.i, b.j)));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(invalid(name, format!("bracket ({}, {}) listed twice", b.i, b.j)));
            }
            let mut v = vec![self.field.zero(); n];
            for (k, c) in &b.coeffs.0 {
                let k: usize = k
                    .parse()
                    .ok()
                    .filter(|&k| k < n)
                    .ok_or_else(|| invalid(name, format!("coefficient index {k:?} out of range")))?;
                v[k] = parse_scalar(self.field, name, c)?;
            }
            brackets.push((b.i, b.j, v));
        }
        let alg = LieAlgebra::new(self.field, labels, brackets).map_err(|e| invalid(name, e))?;
        let violations = alg.check();
        if violations.is_empty() {
            return Ok(Some(alg));
        }
        for v in violations {
            self.problem(
                name,
                format!("Jacobi identity fails at ({}, {}, {}): defect {}", v.i, v.j, v.k, fmt_vector(&v.defect)),
                Some(vec![v.i, v.j, v.k]),
            );
        }
        Ok(None)
    }
}

/// Parses and validates a workspace.
pub fn load(text: &str) -> Result<Workspace, LoadError> {
    let document: Document = serde_json::from_str(text).map_err(|e| LoadError::Parse(e.to_string()))?;
    from_document(document)
}

pub fn from_document(document: Document) -> Result<Workspace, LoadError> {
    let field = parse_field(&document.field)?;
    let mut names = BTreeSet::new();
    let d = &document;
    for name in d.algebras.0.keys().chain(d.maps.0.keys()).chain(d.actions.0.keys()).chain(d.extensions.0.keys()) {
        if !names.insert(name.clone()) {
            return Err(invalid(name, "name is used by more than one object"));
        }
    }
    let mut ld = Loader { field, failed: BTreeSet::new(), problems: Vec::new() };

    let mut algebras = BTreeMap::new();
    for (name, doc) in &d.algebras.0 {
        if let Some(alg) = ld.algebra(name, doc)? {
            algebras.insert(name.clone(), Arc::new(alg));
        }
    }

    let mut maps = BTreeMap::new();
    for (name, doc) in &d.maps.0 {
        let (Some(from), Some(to)) =
            (ld.resolve(name, "algebra", &doc.from, &algebras)?, ld.resolve(name, "algebra", &doc.to, &algebras)?)
        else {
            continue;
        };
        let m = parse_matrix(field, name, to.dim(), from.dim(), &doc.matrix)?;
        let map = AlgebraMap::new(from.clone(), to.clone(), m).map_err(|e| invalid(name, e))?;
        maps.insert(name.clone(), map);
    }

    let mut actions = BTreeMap::new();
    for (name, doc) in &d.actions.0 {
        let (Some(b), Some(a)) =
            (ld.resolve(name, "algebra", &doc.b, &algebras)?, ld.resolve(name, "algebra", &doc.a, &algebras)?)
        else {
            continue;
        };
        let (b, a) = (b.clone(), a.clone());
        let rho =
            doc.rho.iter().map(|m| parse_matrix(field, name, a.dim(), a.dim(), m)).collect::<Result<Vec<_>, _>>()?;
        let act = match ModuleAction::new(b, a, rho) {
            Ok(act) => act,
            Err(e) if is_structural(&e) => return Err(invalid(name, e)),
            Err(e) => {
                ld.problem(name, e, None);
                continue;
            }
        };
        let violations = act.check();
        if violations.is_empty() {
            actions.insert(name.clone(), Arc::new(act));
        }
        for v in violations {
            ld.problem(
                name,
                format!(
                    "action fails [b{}, b{}] compatibility: defect {}",
                    v.i,
                    v.j,
                    v.defect.to_rows().iter().map(|r| fmt_vector(r)).collect::<Vec<_>>().join(" ")
                ),
                Some(vec![v.i, v.j]),
            );
        }
    }

    let mut extensions = BTreeMap::new();
    for (name, doc) in &d.extensions.0 {
        let built = match (&doc.from_cocycle, &doc.l, &doc.inj, &doc.proj) {
            (Some(fc), None, None, None) if doc.sect.is_none() => {
                let Some(act) = ld.resolve(name, "action", &fc.action, &actions)? else {
                    continue;
                };
                let act = act.clone();
                let mut values = BTreeMap::new();
                for entry in &fc.mu {
                    if !(entry.i < entry.j && entry.j < act.b().dim()) {
                        return Err(invalid(
                            name,
                            format!("cocycle entry ({}, {}) must satisfy i < j < {}", entry.i, entry.j, act.b().dim()),
                        ));
                    }
                    let v = parse_vector(field, name, act.a().dim(), &entry.value)?;
                    if values.insert((entry.i, entry.j), v).is_some() {
                        return Err(invalid(name, format!("cocycle entry ({}, {}) listed twice", entry.i, entry.j)));
                    }
                }
                let zero = vec![field.zero(); act.a().dim()];
                let mu = Cochain::from_fn(act.clone(), 2, |t| {
                    values.get(&(t[0], t[1])).cloned().unwrap_or_else(|| zero.clone())
                })
                .map_err(|e| invalid(name, e))?;
                if !cohom::is_cocycle(&mu) {
                    ld.problem(name, Error::NotACocycle(2), None);
                    continue;
                }
                extension::extension_from_cocycle(&act, &mu)
            }
            (None, Some(l), Some(inj), Some(proj)) => {
                let Some(l_alg) = ld.resolve(name, "algebra", l, &algebras)? else {
                    continue;
                };
                let l_alg = l_alg.clone();
                let Some(inj) = ld.resolve(name, "map", inj, &maps)?.cloned() else {
                    continue;
                };
                let Some(proj) = ld.resolve(name, "map", proj, &maps)?.cloned() else {
                    continue;
                };
                let sect = match &doc.sect {
                    None => None,
                    Some(s) => match ld.resolve(name, "map", s, &maps)? {
                        Some(s) => Some(s.clone()),
                        None => continue,
                    },
                };
                if inj.target() != &l_alg || proj.source() != &l_alg {
                    return Err(invalid(name, "inj must map into L and proj must map out of L"));
                }
                ExtensionData::new(inj, proj, sect)
            }
            _ => {
                return Err(invalid(name, "extension needs either L, inj, proj (and optionally sect) or from_cocycle"))
            }
        };
        match built {
            Ok(ext) => {
                extensions.insert(name.clone(), ext);
            }
            Err(e) if is_structural(&e) => return Err(invalid(name, e)),
            Err(e) => ld.problem(name, e, None),
        }
    }

    Ok(Workspace { document, field, algebras, maps, actions, extensions, problems: ld.problems })
}

/// Canonical form: brackets and cocycle entries sorted by `(i, j)`, zero
/// coefficients and all-zero entries dropped.
pub fn canonicalize(doc: &Document) -> Document {
    let mut out = doc.clone();
    for alg in out.algebras.0.values_mut() {
        for b in &mut alg.brackets {
            b.coeffs.0.retain(|_, v| v != "0");
        }
        alg.brackets.retain(|b| !b.coeffs.is_empty());
        alg.brackets.sort_by_key(|b| (b.i, b.j));
    }
    for ext in out.extensions.0.values_mut() {
        if let Some(fc) = &mut ext.from_cocycle {
            fc.mu.retain(|e| e.value.iter().any(|v| v != "0"));
            fc.mu.sort_by_key(|e| (e.i, e.j));
        }
    }
    out
}

/// Pretty-printed canonical JSON with a trailing newline.
pub fn emit(doc: &Document) -> String {
    let mut s = serde_json::to_string_pretty(&canonicalize(doc)).expect("documents serialize");
    s.push('\n');
    s
}

pub fn matrix_doc(m: &Matrix) -> MatrixDoc {
    m.to_rows().iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

pub fn algebra_doc(alg: &LieAlgebra) -> AlgebraDoc {
    let brackets = alg
        .nonzero_brackets()
        .map(|(i, j, v)| BracketDoc {
            i,
            j,
            coeffs: UniqueMap(
                v.iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k.to_string(), c.to_string()))
                    .collect(),
            ),
        })
        .collect();
    AlgebraDoc { dim: alg.dim(), labels: alg.labels().to_vec(), brackets }
}

pub fn map_doc(from: &str, to: &str, m: &AlgebraMap) -> MapDoc {
    MapDoc { from: from.to_string(), to: to.to_string(), matrix: matrix_doc(m.matrix()) }
}

pub fn action_doc(b: &str, a: &str, act: &ModuleAction) -> ActionDoc {
    ActionDoc { b: b.to_string(), a: a.to_string(), rho: act.rho().iter().map(matrix_doc).collect() }
}

/// Nonzero values of a 2-cochain on increasing basis pairs.
pub fn cochain_entries(mu: &Cochain) -> Vec<CochainEntryDoc> {
    let n = mu.action().b().dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = mu.on_basis(&[i, j]);
            if v.iter().any(|s| !s.is_zero()) {
                out.push(CochainEntryDoc { i, j, value: v.iter().map(|s| s.to_string()).collect() });
            }
        }
    }
    out
}

/// Adds `L`, `inj`, `proj`, `sect` and the extension to `doc` under
/// `prefix`-based names.
pub fn add_extension(
    doc: &mut Document,
    prefix: &str,
    a_name: &str,
    b_name: &str,
    ext: &ExtensionData,
) -> Result<String, LoadError> {
    let l = format!("{prefix}_L");
    let (inj, proj, sect) = (format!("{prefix}_inj"), format!("{prefix}_proj"), format!("{prefix}_sect"));
    let e = prefix.to_string();
    for n in [&l, &inj, &proj, &sect, &e] {
        let d = &*doc;
        if d.algebras.0.contains_key(n)
            || d.maps.0.contains_key(n)
            || d.actions.0.contains_key(n)
            || d.extensions.0.contains_key(n)
        {
            return Err(invalid(n, "name already in use"));
        }
    }
    doc.algebras.0.insert(l.clone(), algebra_doc(ext.l()));
    doc.maps.0.insert(inj.clone(), map_doc(a_name, &l, ext.inj()));
    doc.maps.0.insert(proj.clone(), map_doc(&l, b_name, ext.proj()));
    doc.maps.0.insert(sect.clone(), map_doc(b_name, &l, ext.sect()));
    doc.extensions.0.insert(
        e.clone(),
        ExtensionDoc { l: Some(l), inj: Some(inj), proj: Some(proj), sect: Some(sect), from_cocycle: None },
    );
    Ok(e)
}
