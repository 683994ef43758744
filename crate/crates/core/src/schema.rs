//! The structured-text document format shared by every input and output
//! file. Each document is a JSON object whose `kind` field selects the
//! payload.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxprod::BoxWord;
use crate::cubes::{CubeConfig, CubeConfigFile};
use crate::operad::{Assoc, Comm, FreeBinary, GeneratorSignature, Op, Permutation, SetOperad, TabulatedOperad};
use crate::simplicial::{CategoryFile, FiniteCategory, FiniteSimplicialSet, MSet, Monoid, MonoidFile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected a {expected} document, found {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("invalid {kind} document: {reason}")]
    Invalid { kind: &'static str, reason: String },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    CubeConfig(CubeConfigFile),
    BoxWord(BoxWordFile),
    Sset(FiniteSimplicialSet),
    Category(CategoryFile),
    OperadTable(OperadTableFile),
    MonoidModule(MonoidModuleFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxWordFile {
    pub word: String,
}

/// A monoid with any number of sets it acts on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonoidModuleFile {
    pub monoid: MonoidFile,
    #[serde(default)]
    pub modules: Vec<MSet>,
}

/// A finite set operad, either one of the built-in families or explicit tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum OperadTableFile {
    Comm { cap: usize },
    Assoc { cap: usize },
    FreeBinary { cap: usize, node_cap: usize },
    Table(OperadTable),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperadTable {
    pub name: String,
    pub carriers: Vec<Vec<String>>,
    pub unit: Op,
    pub composition: Vec<CompositionEntry>,
    pub action: Vec<ActionEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositionEntry {
    pub outer: Op,
    pub inners: Vec<Op>,
    pub result: Op,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionEntry {
    pub op: Op,
    pub perm: Permutation,
    pub result: Op,
}

impl OperadTableFile {
    pub fn build(&self) -> Result<Box<dyn SetOperad>, SchemaError> {
        Ok(match self {
            OperadTableFile::Comm { cap } => Box::new(Comm::new(*cap)),
            OperadTableFile::Assoc { cap } => Box::new(Assoc::new(*cap)),
            OperadTableFile::FreeBinary { cap, node_cap } => Box::new(FreeBinary::new(*cap, *node_cap)),
            OperadTableFile::Table(t) => Box::new(t.to_operad()?),
        })
    }
}

impl OperadTable {
    /// Tabulates `c`, with entries sorted so that output is deterministic.
    pub fn tabulate(c: &dyn SetOperad) -> Result<Self, SchemaError> {
        let t = TabulatedOperad::from_operad(c).map_err(|e| SchemaError::Invalid {
            kind: "operad-table",
            reason: e.to_string(),
        })?;
        let mut composition: Vec<CompositionEntry> = t
            .composition
            .into_iter()
            .map(|((outer, inners), result)| CompositionEntry { outer, inners, result })
            .collect();
        composition.sort();
        let mut action: Vec<ActionEntry> = t
            .action
            .into_iter()
            .map(|((op, perm), result)| ActionEntry { op, perm, result })
            .collect();
        action.sort();
        Ok(OperadTable {
            name: t.name,
            carriers: t.carriers,
            unit: t.unit,
            composition,
            action,
        })
    }

    pub fn to_operad(&self) -> Result<TabulatedOperad, SchemaError> {
        let bad = |reason: String| SchemaError::Invalid {
            kind: "operad-table",
            reason,
        };
        let known = |op: &Op| op.arity < self.carriers.len() && op.index < self.carriers[op.arity].len();
        if !known(&self.unit) || self.unit.arity != 1 {
            return Err(bad(format!("unit {:?} is not a unary element", self.unit)));
        }
        let mut composition = HashMap::new();
        for e in &self.composition {
            if !known(&e.outer) || !known(&e.result) || e.inners.iter().any(|y| !known(y)) {
                return Err(bad(format!("composition entry {e:?} names an unknown element")));
            }
            if e.inners.len() != e.outer.arity || e.inners.iter().map(|y| y.arity).sum::<usize>() != e.result.arity {
                return Err(bad(format!("composition entry {e:?} has inconsistent arities")));
            }
            composition.insert((e.outer, e.inners.clone()), e.result);
        }
        let mut action = HashMap::new();
        for e in &self.action {
            if !known(&e.op) || !known(&e.result) || e.perm.size() != e.op.arity || e.result.arity != e.op.arity {
                return Err(bad(format!("action entry {e:?} is inconsistent")));
            }
            action.insert((e.op, e.perm.clone()), e.result);
        }
        Ok(TabulatedOperad {
            name: self.name.clone(),
            carriers: self.carriers.clone(),
            unit: self.unit,
            composition,
            action,
        })
    }
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        serde_json::from_str(text).map_err(|e| SchemaError::Parse(e.to_string()))
    }

    /// Pretty-printed, newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::CubeConfig(_) => "cube-config",
            Document::BoxWord(_) => "box-word",
            Document::Sset(_) => "sset",
            Document::Category(_) => "category",
            Document::OperadTable(_) => "operad-table",
            Document::MonoidModule(_) => "monoid-module",
        }
    }

    fn wrong(&self, expected: &'static str) -> SchemaError {
        SchemaError::WrongKind {
            expected,
            found: self.kind(),
        }
    }

    pub fn cube_config(&self) -> Result<CubeConfig, SchemaError> {
        match self {
            Document::CubeConfig(f) => CubeConfig::try_from(f.clone()).map_err(|e| SchemaError::Invalid {
                kind: "cube-config",
                reason: e.to_string(),
            }),
            _ => Err(self.wrong("cube-config")),
        }
    }

    pub fn box_word(&self) -> Result<BoxWord<GeneratorSignature>, SchemaError> {
        match self {
            Document::BoxWord(f) => BoxWord::parse(&f.word).map_err(|e| SchemaError::Invalid {
                kind: "box-word",
                reason: e.to_string(),
            }),
            _ => Err(self.wrong("box-word")),
        }
    }

    pub fn sset(&self) -> Result<FiniteSimplicialSet, SchemaError> {
        match self {
            Document::Sset(s) => Ok(s.clone()),
            _ => Err(self.wrong("sset")),
        }
    }

    pub fn category(&self) -> Result<FiniteCategory, SchemaError> {
        match self {
            Document::Category(f) => FiniteCategory::try_from(f.clone()).map_err(|e| SchemaError::Invalid {
                kind: "category",
                reason: e.to_string(),
            }),
            _ => Err(self.wrong("category")),
        }
    }

    pub fn operad(&self) -> Result<Box<dyn SetOperad>, SchemaError> {
        match self {
            Document::OperadTable(f) => f.build(),
            _ => Err(self.wrong("operad-table")),
        }
    }

    /// The monoid and its modules, each validated against it.
    pub fn monoid_module(&self) -> Result<(Monoid, Vec<MSet>), SchemaError> {
        let Document::MonoidModule(f) = self else {
            return Err(self.wrong("monoid-module"));
        };
        let bad = |e: crate::simplicial::SimplicialError| SchemaError::Invalid {
            kind: "monoid-module",
            reason: e.to_string(),
        };
        let monoid = Monoid::try_from(f.monoid.clone()).map_err(bad)?;
        for m in &f.modules {
            m.validate(&monoid).map_err(bad)?;
        }
        Ok((monoid, f.modules.clone()))
    }
}

impl From<&CubeConfig> for Document {
    fn from(c: &CubeConfig) -> Self {
        Document::CubeConfig(c.into())
    }
}

impl From<&BoxWord<GeneratorSignature>> for Document {
    fn from(w: &BoxWord<GeneratorSignature>) -> Self {
        Document::BoxWord(BoxWordFile { word: w.to_string() })
    }
}

impl From<FiniteSimplicialSet> for Document {
    fn from(s: FiniteSimplicialSet) -> Self {
        Document::Sset(s)
    }
}

impl From<FiniteCategory> for Document {
    fn from(c: FiniteCategory) -> Self {
        Document::Category(c.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::LittleCube;
    use crate::simplicial::{nerve, Side};

    fn roundtrip(d: &Document) {
        let text = d.to_text();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.kind(), d.kind());
    }

    #[test]
    fn cube_config_text() {
        let text = r#"{"kind":"cube-config","k":1,"strict":false,"cubes":[[["1/2","1/1"]]]}"#;
        let d = Document::parse(text).unwrap();
        let c = d.cube_config().unwrap();
        assert_eq!(c.cubes()[0], LittleCube::from_fractions(&[((1, 2), (1, 1))]));
        assert!(d.to_text().contains("\"1/2\""));
        roundtrip(&d);
    }

    #[test]
    fn every_kind_roundtrips() {
        let c = CubeConfig::unit(2);
        roundtrip(&Document::from(&c));
        let w = BoxWord::parse("(L:alpha (R:beta 1 2) (R:beta 3 4))[1,3,2,4]").unwrap();
        roundtrip(&Document::from(&w));
        roundtrip(&Document::from(FiniteSimplicialSet::simplex(2, 2)));
        roundtrip(&Document::from(FiniteCategory::arrow()));
        roundtrip(&Document::OperadTable(OperadTableFile::Comm { cap: 3 }));
        roundtrip(&Document::OperadTable(OperadTableFile::FreeBinary { cap: 3, node_cap: 2 }));
        roundtrip(&Document::OperadTable(OperadTableFile::Table(OperadTable::tabulate(&Assoc::new(2)).unwrap())));
        let m = Monoid::cyclic(2);
        roundtrip(&Document::MonoidModule(MonoidModuleFile {
            monoid: m.clone().into(),
            modules: vec![MSet::regular(&m, Side::Left)],
        }));
        roundtrip(&Document::from(nerve(&FiniteCategory::arrow(), 2)));
    }

    #[test]
    fn tabulated_operad_agrees() {
        let a = Assoc::new(3);
        let t = OperadTable::tabulate(&a).unwrap().to_operad().unwrap();
        for outer in a.elements(2) {
            for x in a.elements(1) {
                for y in a.elements(2) {
                    assert_eq!(t.compose(outer, &[x, y]).unwrap(), a.compose(outer, &[x, y]).unwrap());
                }
            }
        }
    }

    #[test]
    fn wrong_kind_and_bad_input() {
        let d = Document::from(FiniteSimplicialSet::simplex(0, 0));
        assert!(matches!(d.cube_config(), Err(SchemaError::WrongKind { .. })));
        assert!(matches!(Document::parse("{\"kind\":\"nope\"}"), Err(SchemaError::Parse(_))));
        assert!(matches!(Document::parse("not json"), Err(SchemaError::Parse(_))));
        let overlap = r#"{"kind":"cube-config","k":1,"strict":false,"cubes":[[["0","1/2"]],[["1/4","1"]]]}"#;
        assert!(matches!(Document::parse(overlap).unwrap().cube_config(), Err(SchemaError::Invalid { .. })));
    }

    #[test]
    fn bad_table_rejected() {
        let mut t = OperadTable::tabulate(&Comm::new(2)).unwrap();
        t.composition[0].result = Op::new(9, 0);
        assert!(t.to_operad().is_err());
    }
}
