//! JSON documents for algebras, homs, points, extensions and relations.
//!
//! Algebra documents look like
//! `{"kind":"monoid","name":"Z2","order":2,"unit":0,"table":[[0,1],[1,0]]}`;
//! semirings carry `addTable` and `mulTable` instead of `table` and `unit`.
//! Hom documents reference algebras by name. Unknown fields are rejected.
//! The canonical serialization is compact JSON with sorted keys followed by
//! a newline.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::algebra::{validate, Algebra, Hom, Kind, Obj, RawAlgebra};
use crate::error::{Error, Result};
use crate::points::SplitPoint;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct AlgebraDoc {
    pub kind: String,
    pub name: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add_table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mul_table: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: String,
    pub target: String,
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f: HomDoc,
    pub s: HomDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub f: HomDoc,
}

/// A relation given by its pairs: `{"pairs":[[a,b],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationDoc {
    pub pairs: Vec<[usize; 2]>,
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Monoid => "monoid",
        Kind::Quandle => "quandle",
        Kind::Semiring => "semiring",
    }
}

pub fn algebra_doc(a: &Algebra, name: &str) -> AlgebraDoc {
    let mut doc = AlgebraDoc {
        kind: kind_name(a.kind()).into(),
        name: name.into(),
        order: a.order(),
        unit: None,
        table: None,
        add_table: None,
        mul_table: None,
    };
    match a.kind() {
        Kind::Monoid => {
            doc.unit = a.unit();
            doc.table = Some(a.table(0));
        }
        Kind::Quandle => doc.table = Some(a.table(0)),
        Kind::Semiring => {
            doc.add_table = Some(a.table(0));
            doc.mul_table = Some(a.table(1));
        }
    }
    doc
}

pub fn algebra_from_doc(doc: AlgebraDoc) -> Result<Algebra> {
    let kind = Kind::parse(&doc.kind).ok_or_else(|| Error::Document(format!("unknown kind {:?}", doc.kind)))?;
    let field = |present: bool, what: &str| -> Result<()> {
        if present {
            Err(Error::Document(format!("{} documents have no field {what}", doc.kind)))
        } else {
            Ok(())
        }
    };
    let tables = match kind {
        Kind::Monoid | Kind::Quandle => {
            field(doc.add_table.is_some(), "addTable")?;
            field(doc.mul_table.is_some(), "mulTable")?;
            if kind == Kind::Quandle {
                field(doc.unit.is_some(), "unit")?;
            }
            vec![doc.table.clone().ok_or_else(|| Error::Document("missing field table".into()))?]
        }
        Kind::Semiring => {
            field(doc.table.is_some(), "table")?;
            field(doc.unit.is_some(), "unit")?;
            vec![
                doc.add_table.clone().ok_or_else(|| Error::Document("missing field addTable".into()))?,
                doc.mul_table.clone().ok_or_else(|| Error::Document("missing field mulTable".into()))?,
            ]
        }
    };
    if tables.iter().any(|t| t.len() != doc.order) {
        return Err(Error::Shape(format!("order {} does not match the tables", doc.order)));
    }
    validate(
        kind,
        RawAlgebra {
            tables,
            unit: doc.unit,
            name: Some(doc.name),
        },
    )
}

/// Named algebras, homs, points and extensions read from documents.
#[derive(Debug, Clone, Default)]
pub struct Library {
    pub algebras: BTreeMap<String, Obj>,
    pub homs: BTreeMap<String, Hom>,
    pub points: BTreeMap<String, SplitPoint>,
    pub extensions: BTreeMap<String, Hom>,
    order: Vec<(String, String)>,
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Document(format!("line {}, column {}: {e}", e.line(), e.column()))
}

/// Parses a single document or an array of documents.
pub fn parse_values(text: &str) -> Result<Vec<Value>> {
    let value: Value = serde_json::from_str(text).map_err(parse_error)?;
    Ok(match value {
        Value::Array(items) => items,
        other => vec![other],
    })
}

impl Library {
    pub fn parse(text: &str) -> Result<Library> {
        let mut lib = Library::default();
        lib.load_str(text)?;
        Ok(lib)
    }

    pub fn load_str(&mut self, text: &str) -> Result<()> {
        let values = parse_values(text)?;
        // algebras first so that homs may reference later documents
        let (algebras, rest): (Vec<Value>, Vec<Value>) = values
            .into_iter()
            .partition(|v| v.get("kind").and_then(Value::as_str).and_then(Kind::parse).is_some());
        for (i, v) in algebras.into_iter().enumerate() {
            let doc: AlgebraDoc =
                serde_json::from_value(v).map_err(|e| Error::Document(format!("algebra document {i}: {e}")))?;
            let name = doc.name.clone();
            let a = algebra_from_doc(doc)?;
            self.order.push(("algebra".into(), name.clone()));
            self.algebras.insert(name, a.into_obj());
        }
        for (i, v) in rest.into_iter().enumerate() {
            let kind = v
                .get("kind")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Document(format!("document {i}: missing field kind")))?
                .to_string();
            let ctx = |e: serde_json::Error| Error::Document(format!("{kind} document {i}: {e}"));
            match kind.as_str() {
                "hom" => {
                    let doc: HomDoc = serde_json::from_value(v).map_err(ctx)?;
                    let h = self.hom(&doc)?;
                    let name = doc.name.unwrap_or_else(|| format!("hom{}", self.homs.len()));
                    self.order.push(("hom".into(), name.clone()));
                    self.homs.insert(name, h);
                }
                "point" => {
                    let doc: PointDoc = serde_json::from_value(v).map_err(ctx)?;
                    let p = SplitPoint::new(self.hom(&doc.f)?, self.hom(&doc.s)?)?;
                    let name = doc.name.unwrap_or_else(|| format!("point{}", self.points.len()));
                    self.order.push(("point".into(), name.clone()));
                    self.points.insert(name, p);
                }
                "extension" => {
                    let doc: ExtensionDoc = serde_json::from_value(v).map_err(ctx)?;
                    let f = self.hom(&doc.f)?;
                    let name = doc.name.unwrap_or_else(|| format!("extension{}", self.extensions.len()));
                    self.order.push(("extension".into(), name.clone()));
                    self.extensions.insert(name, f);
                }
                other => return Err(Error::Document(format!("document {i}: unknown kind {other:?}"))),
            }
        }
        Ok(())
    }

    pub fn algebra(&self, name: &str) -> Result<&Obj> {
        self.algebras
            .get(name)
            .ok_or_else(|| Error::Reference(format!("no algebra named {name:?}")))
    }

    pub fn hom(&self, doc: &HomDoc) -> Result<Hom> {
        if doc.kind != "hom" {
            return Err(Error::Document(format!("expected a hom document, got kind {:?}", doc.kind)));
        }
        let source = self.algebra(&doc.source)?.clone();
        let target = self.algebra(&doc.target)?.clone();
        Hom::new(source, target, doc.map.clone())
    }

    /// Re-serializes every document in load order.
    pub fn to_values(&self) -> Vec<Value> {
        let mut out = Vec::new();
        for (what, name) in &self.order {
            let v = match what.as_str() {
                "algebra" => serde_json::to_value(algebra_doc(&self.algebras[name], name)),
                "hom" => serde_json::to_value(self.hom_doc(Some(name), &self.homs[name])),
                "point" => {
                    let p = &self.points[name];
                    serde_json::to_value(PointDoc {
                        kind: "point".into(),
                        name: Some(name.clone()),
                        f: self.hom_doc(None, p.f()),
                        s: self.hom_doc(None, p.s()),
                    })
                }
                _ => serde_json::to_value(ExtensionDoc {
                    kind: "extension".into(),
                    name: Some(name.clone()),
                    f: self.hom_doc(None, &self.extensions[name]),
                }),
            };
            out.push(v.expect("documents serialize"));
        }
        out
    }

    fn name_of(&self, a: &Obj) -> String {
        self.algebras
            .iter()
            .find(|(_, b)| **b == *a)
            .map(|(n, _)| n.clone())
            .unwrap_or_else(|| a.label())
    }

    fn hom_doc(&self, name: Option<&String>, h: &Hom) -> HomDoc {
        HomDoc {
            kind: "hom".into(),
            name: name.cloned(),
            source: self.name_of(h.source()),
            target: self.name_of(h.target()),
            map: h.map().to_vec(),
        }
    }
}

/// Canonical text of a document: compact, sorted keys, trailing newline.
pub fn to_canonical_string(value: &Value) -> String {
    let mut s = serde_json::to_string(value).expect("values serialize");
    s.push('\n');
    s
}

/// Canonical text of a list of documents (a single one is not wrapped).
pub fn save_values(values: &[Value]) -> String {
    if values.len() == 1 {
        to_canonical_string(&values[0])
    } else {
        to_canonical_string(&Value::Array(values.to_vec()))
    }
}

pub fn parse_relation(text: &str) -> Result<Vec<(usize, usize)>> {
    let doc: RelationDoc = serde_json::from_str(text).map_err(parse_error)?;
    Ok(doc.pairs.into_iter().map(|[a, b]| (a, b)).collect())
}

pub fn relation_value(pairs: &[(usize, usize)]) -> Value {
    serde_json::to_value(RelationDoc {
        pairs: pairs.iter().map(|&(a, b)| [a, b]).collect(),
    })
    .expect("relation serializes")
}

/// Builder for self-contained witness documents: every algebra referenced
/// by a hom is embedded under `"algebras"`.
#[derive(Default)]
pub struct Witness {
    algebras: Vec<(String, Obj)>,
    fields: Map<String, Value>,
}

impl Witness {
    pub fn new() -> Self {
        Self::default()
    }

    fn name_of(&mut self, a: &Obj) -> String {
        if let Some((n, _)) = self.algebras.iter().find(|(_, b)| **b == **a) {
            return n.clone();
        }
        let base = a.label();
        let mut name = base.clone();
        let mut i = 1;
        while self.algebras.iter().any(|(n, _)| *n == name) {
            name = format!("{base}.{i}");
            i += 1;
        }
        self.algebras.push((name.clone(), a.clone()));
        name
    }

    fn hom_value(&mut self, h: &Hom) -> Value {
        let doc = HomDoc {
            kind: "hom".into(),
            name: None,
            source: self.name_of(h.source()),
            target: self.name_of(h.target()),
            map: h.map().to_vec(),
        };
        serde_json::to_value(doc).expect("hom serializes")
    }

    pub fn hom(mut self, key: &str, h: &Hom) -> Self {
        let v = self.hom_value(h);
        self.fields.insert(key.into(), v);
        self
    }

    pub fn point(mut self, key: &str, p: &SplitPoint) -> Self {
        let f = self.hom_value(p.f());
        let s = self.hom_value(p.s());
        let mut m = Map::new();
        m.insert("kind".into(), Value::from("point"));
        m.insert("f".into(), f);
        m.insert("s".into(), s);
        self.fields.insert(key.into(), Value::Object(m));
        self
    }

    pub fn algebra(mut self, key: &str, a: &Obj) -> Self {
        let name = self.name_of(a);
        self.fields.insert(key.into(), Value::from(name));
        self
    }

    pub fn relation(mut self, key: &str, pairs: &[(usize, usize)]) -> Self {
        self.fields.insert(key.into(), relation_value(pairs));
        self
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.fields
            .insert(key.into(), serde_json::to_value(v).expect("witness field serializes"));
        self
    }

    pub fn build(mut self) -> Value {
        let algebras: Vec<Value> = self
            .algebras
            .iter()
            .map(|(n, a)| serde_json::to_value(algebra_doc(a, n)).expect("algebra serializes"))
            .collect();
        self.fields.insert("algebras".into(), Value::Array(algebras));
        Value::Object(self.fields)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z2: &str = r#"{"kind":"monoid","name":"Z2","order":2,"table":[[0,1],[1,0]],"unit":0}"#;

    #[test]
    fn canonical_round_trip() {
        let lib = Library::parse(Z2).unwrap();
        let saved = save_values(&lib.to_values());
        assert_eq!(saved, format!("{Z2}\n"));
        let again = Library::parse(&saved).unwrap();
        assert_eq!(save_values(&again.to_values()), saved);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = r#"{"kind":"monoid","name":"Z2","order":2,"table":[[0,1],[1,0]],"unit":0,"color":"red"}"#;
        assert!(matches!(Library::parse(text), Err(Error::Document(_))));
    }

    #[test]
    fn missing_reference_rejected() {
        let text = format!(r#"[{Z2},{{"kind":"hom","source":"Z2","target":"Z4","map":[0,0]}}]"#);
        assert!(matches!(Library::parse(&text), Err(Error::Reference(_))));
    }

    #[test]
    fn axiom_errors_surface() {
        let text = r#"{"kind":"monoid","name":"bad","order":2,"table":[[0,1],[1,1]],"unit":1}"#;
        assert!(matches!(Library::parse(text), Err(Error::AxiomViolation { .. })));
    }

    #[test]
    fn points_and_semirings_load() {
        let text = r#"[
          {"kind":"semiring","name":"Bool","order":2,"addTable":[[0,1],[1,1]],"mulTable":[[0,0],[0,1]]},
          {"kind":"monoid","name":"Z2","order":2,"table":[[0,1],[1,0]],"unit":0},
          {"kind":"monoid","name":"One","order":1,"table":[[0]],"unit":0},
          {"kind":"point","name":"p","f":{"kind":"hom","source":"Z2","target":"One","map":[0,0]},
           "s":{"kind":"hom","source":"One","target":"Z2","map":[0]}}
        ]"#;
        let lib = Library::parse(text).unwrap();
        assert_eq!(lib.algebras["Bool"].constants(), &[0, 1]);
        assert_eq!(lib.points["p"].domain().order(), 2);
        let again = Library::parse(&save_values(&lib.to_values())).unwrap();
        assert_eq!(again.points["p"], lib.points["p"]);
    }

    #[test]
    fn parse_error_has_position() {
        let err = Library::parse("{\n\"kind\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
