//! JSON document formats for spaces, modules, filters, sequences, and
//! functors, plus a canonical writer.
//!
//! Values are encoded as strings — `p/q` reduced, bare integers, `inf`;
//! `0`/`1` on the Boolean base — with non-negative JSON integers accepted
//! on input. The writer emits fixed key order and canonical value text, so
//! parsing and re-rendering a document is byte-stable.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::completion::Completion;
use crate::filter::{Filter, PeriodicSequence};
use crate::module::{LeftModule, ModuleReport, RightModule};
use crate::quantale::{Base, Value};
use crate::space::{Functor, Space};
use crate::Error;

/// A value as it appears in JSON: canonical string or integer shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Int(u64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub base: String,
    pub objects: Vec<String>,
    pub hom: Vec<Vec<RawValue>>,
}

/// A space given inline or as a path to a space document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Inline(SpaceDoc),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub space: SpaceRef,
    pub side: String,
    pub values: Vec<RawValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterDoc {
    pub space: SpaceRef,
    pub core: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub space: SpaceRef,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctorDoc {
    pub source: SpaceRef,
    pub target: SpaceRef,
    pub map: BTreeMap<String, String>,
}

/// Output document of the completion verbs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionDoc {
    pub space: SpaceDoc,
    pub embedding: BTreeMap<String, String>,
    pub carrier: Vec<Vec<String>>,
}

pub fn base_from_str(s: &str) -> Result<Base, Error> {
    match s {
        "cost" => Ok(Base::Cost),
        "bool" => Ok(Base::Bool),
        other => Err(Error::Document(format!(
            "unknown base `{other}`: expected `cost` or `bool`"
        ))),
    }
}

fn value_from_raw(base: Base, raw: &RawValue) -> Result<Value, Error> {
    match raw {
        RawValue::Int(n) => Ok(base.value_from_u64(*n)?),
        RawValue::Text(s) => Ok(base.parse_value(s)?),
    }
}

fn raw_from_value(v: &Value) -> RawValue {
    RawValue::Text(v.to_string())
}

pub fn space_from_doc(doc: &SpaceDoc) -> Result<Space, Error> {
    let base = base_from_str(&doc.base)?;
    let mut hom = Vec::with_capacity(doc.hom.len());
    for row in &doc.hom {
        let mut parsed = Vec::with_capacity(row.len());
        for raw in row {
            parsed.push(value_from_raw(base, raw)?);
        }
        hom.push(parsed);
    }
    Space::new(base, doc.objects.clone(), hom)
}

pub fn space_to_doc(space: &Space) -> SpaceDoc {
    SpaceDoc {
        base: space.base().to_string(),
        objects: space.objects().to_vec(),
        hom: space
            .hom_matrix()
            .iter()
            .map(|row| row.iter().map(raw_from_value).collect())
            .collect(),
    }
}

/// Resolves a space reference; paths are read relative to `dir`.
pub fn resolve_space(space_ref: &SpaceRef, dir: Option<&Path>) -> Result<Space, Error> {
    match space_ref {
        SpaceRef::Inline(doc) => space_from_doc(doc),
        SpaceRef::Path(path) => {
            let full = match dir {
                Some(d) => d.join(path),
                None => path.into(),
            };
            let text = std::fs::read_to_string(full)?;
            let doc: SpaceDoc = serde_json::from_str(&text)?;
            space_from_doc(&doc)
        }
    }
}

/// A module plus which side it lives on.
#[derive(Debug, Clone)]
pub enum AnyModule {
    Left(LeftModule),
    Right(RightModule),
}

/// Parses the document without enforcing the module inequality; the raw
/// pieces let callers produce a validation report instead of an error.
pub fn module_parts_from_doc(
    doc: &ModuleDoc,
    dir: Option<&Path>,
) -> Result<(Space, bool, Vec<Value>), Error> {
    let space = resolve_space(&doc.space, dir)?;
    let left = match doc.side.as_str() {
        "left" => true,
        "right" => false,
        other => {
            return Err(Error::Document(format!(
                "unknown module side `{other}`: expected `left` or `right`"
            )))
        }
    };
    let values = doc
        .values
        .iter()
        .map(|raw| value_from_raw(space.base(), raw))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((space, left, values))
}

pub fn module_from_doc(doc: &ModuleDoc, dir: Option<&Path>) -> Result<AnyModule, Error> {
    let (space, left, values) = module_parts_from_doc(doc, dir)?;
    if left {
        Ok(AnyModule::Left(LeftModule::new(&space, values)?))
    } else {
        Ok(AnyModule::Right(RightModule::new(&space, values)?))
    }
}

/// Validation report for a module document.
pub fn validate_module_doc(doc: &ModuleDoc, dir: Option<&Path>) -> Result<ModuleReport, Error> {
    let (space, left, values) = module_parts_from_doc(doc, dir)?;
    if left {
        LeftModule::validate(&space, &values)
    } else {
        RightModule::validate(&space, &values)
    }
}

pub fn module_to_doc(module: &AnyModule) -> ModuleDoc {
    let (space, side, values) = match module {
        AnyModule::Left(m) => (m.space(), "left", m.values()),
        AnyModule::Right(m) => (m.space(), "right", m.values()),
    };
    ModuleDoc {
        space: SpaceRef::Inline(space_to_doc(space)),
        side: side.to_string(),
        values: values.iter().map(raw_from_value).collect(),
    }
}

fn object_index(space: &Space, name: &str) -> Result<usize, Error> {
    space
        .index_of(name)
        .ok_or_else(|| Error::UnknownObject(name.to_string()))
}

pub fn filter_from_doc(doc: &FilterDoc, dir: Option<&Path>) -> Result<Filter, Error> {
    let space = resolve_space(&doc.space, dir)?;
    let core = doc
        .core
        .iter()
        .map(|name| object_index(&space, name))
        .collect::<Result<Vec<_>, _>>()?;
    Filter::new(&space, core)
}

pub fn filter_to_doc(filter: &Filter) -> FilterDoc {
    FilterDoc {
        space: SpaceRef::Inline(space_to_doc(filter.space())),
        core: filter
            .core()
            .iter()
            .map(|&x| filter.space().name(x).to_string())
            .collect(),
    }
}

pub fn sequence_from_doc(
    doc: &SequenceDoc,
    dir: Option<&Path>,
) -> Result<PeriodicSequence, Error> {
    let space = resolve_space(&doc.space, dir)?;
    let prefix = doc
        .prefix
        .iter()
        .map(|name| object_index(&space, name))
        .collect::<Result<Vec<_>, _>>()?;
    let cycle = doc
        .cycle
        .iter()
        .map(|name| object_index(&space, name))
        .collect::<Result<Vec<_>, _>>()?;
    PeriodicSequence::new(&space, prefix, cycle)
}

pub fn functor_from_doc(doc: &FunctorDoc, dir: Option<&Path>) -> Result<Functor, Error> {
    let source = resolve_space(&doc.source, dir)?;
    let target = resolve_space(&doc.target, dir)?;
    let mut map = vec![usize::MAX; source.object_count()];
    for (from, to) in &doc.map {
        let x = object_index(&source, from)?;
        map[x] = object_index(&target, to)?;
    }
    if let Some(x) = map.iter().position(|&t| t == usize::MAX) {
        return Err(Error::Document(format!(
            "functor map misses source object `{}`",
            source.name(x)
        )));
    }
    Functor::new(source, target, map)
}

pub fn completion_to_doc(completion: &Completion) -> CompletionDoc {
    let base_space = completion.base_space();
    let space = completion.space();
    let embedding = base_space
        .objects()
        .iter()
        .enumerate()
        .map(|(x, name)| {
            (
                name.clone(),
                space.name(completion.embedding()[x]).to_string(),
            )
        })
        .collect();
    CompletionDoc {
        space: space_to_doc(space),
        embedding,
        carrier: completion
            .carrier()
            .iter()
            .map(|core| {
                core.iter()
                    .map(|&x| base_space.name(x).to_string())
                    .collect()
            })
            .collect(),
    }
}

/// Any input document, detected by its fields.
#[derive(Debug, Clone)]
pub enum Document {
    Space(SpaceDoc),
    Module(ModuleDoc),
    Filter(FilterDoc),
    Sequence(SequenceDoc),
    Functor(FunctorDoc),
}

/// Detects the document type from its top-level keys and parses it.
pub fn parse_document(text: &str) -> Result<Document, Error> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or_else(|| Error::Document("expected a JSON object".into()))?;
    let doc = if object.contains_key("hom") {
        Document::Space(serde_json::from_value(value)?)
    } else if object.contains_key("values") {
        Document::Module(serde_json::from_value(value)?)
    } else if object.contains_key("core") {
        Document::Filter(serde_json::from_value(value)?)
    } else if object.contains_key("cycle") {
        Document::Sequence(serde_json::from_value(value)?)
    } else if object.contains_key("map") {
        Document::Functor(serde_json::from_value(value)?)
    } else {
        return Err(Error::Document(
            "unrecognized document: expected a space, module, filter, sequence, or functor"
                .into(),
        ));
    };
    Ok(doc)
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z2_json() -> String {
        r#"{
  "base": "cost",
  "objects": ["p", "q"],
  "hom": [["0", "0"], ["1", "0"]]
}"#
        .to_string()
    }

    #[test]
    fn space_round_trip() {
        let doc: SpaceDoc = serde_json::from_str(&z2_json()).unwrap();
        let space = space_from_doc(&doc).unwrap();
        assert_eq!(space.object_count(), 2);
        assert_eq!(space.name(0), "p");
        let back = space_to_doc(&space);
        assert_eq!(space_from_doc(&back).unwrap(), space);
    }

    #[test]
    fn canonical_rendering_is_stable() {
        let doc: SpaceDoc = serde_json::from_str(&z2_json()).unwrap();
        let space = space_from_doc(&doc).unwrap();
        let rendered = to_json_pretty(&space_to_doc(&space));
        let reparsed: SpaceDoc = serde_json::from_str(&rendered).unwrap();
        let rerendered = to_json_pretty(&space_to_doc(&space_from_doc(&reparsed).unwrap()));
        assert_eq!(rendered, rerendered);
    }

    #[test]
    fn shorthand_values_accepted() {
        let text = r#"{
  "base": "cost",
  "objects": ["p", "q"],
  "hom": [[0, "0/2"], ["2/2", 0]]
}"#;
        let doc: SpaceDoc = serde_json::from_str(text).unwrap();
        let space = space_from_doc(&doc).unwrap();
        assert!(space.hom(0, 1).is_unit());
        assert_eq!(space.hom(1, 0).to_string(), "1");
    }

    #[test]
    fn module_documents() {
        let text = format!(
            r#"{{
  "space": {},
  "side": "left",
  "values": ["0", "0"]
}}"#,
            z2_json()
        );
        let doc: ModuleDoc = serde_json::from_str(&text).unwrap();
        match module_from_doc(&doc, None).unwrap() {
            AnyModule::Left(m) => assert_eq!(m.values().len(), 2),
            AnyModule::Right(_) => panic!("expected a left module"),
        }
        let report = validate_module_doc(&doc, None).unwrap();
        assert!(report.is_valid());

        let bad = ModuleDoc {
            values: vec![RawValue::Int(1), RawValue::Int(0)],
            ..doc
        };
        assert!(!validate_module_doc(&bad, None).unwrap().is_valid());
        assert!(matches!(
            module_from_doc(&bad, None),
            Err(Error::InvalidModule(_))
        ));
    }

    #[test]
    fn filter_and_sequence_documents() {
        let text = format!(
            r#"{{ "space": {}, "core": ["q", "p", "q"] }}"#,
            z2_json()
        );
        let doc: FilterDoc = serde_json::from_str(&text).unwrap();
        let filter = filter_from_doc(&doc, None).unwrap();
        assert_eq!(filter.core(), &[0, 1]);
        let back = filter_to_doc(&filter);
        assert_eq!(back.core, vec!["p".to_string(), "q".to_string()]);

        let text = format!(
            r#"{{ "space": {}, "prefix": [], "cycle": ["p", "q"] }}"#,
            z2_json()
        );
        let doc: SequenceDoc = serde_json::from_str(&text).unwrap();
        let seq = sequence_from_doc(&doc, None).unwrap();
        assert_eq!(seq.cycle(), &[0, 1]);

        let text = format!(
            r#"{{ "space": {}, "core": ["r"] }}"#,
            z2_json()
        );
        let doc: FilterDoc = serde_json::from_str(&text).unwrap();
        assert!(matches!(
            filter_from_doc(&doc, None),
            Err(Error::UnknownObject(_))
        ));
    }

    #[test]
    fn functor_documents() {
        let text = format!(
            r#"{{
  "source": {},
  "target": {},
  "map": {{ "p": "q", "q": "q" }}
}}"#,
            z2_json(),
            z2_json()
        );
        let doc: FunctorDoc = serde_json::from_str(&text).unwrap();
        let f = functor_from_doc(&doc, None).unwrap();
        assert_eq!(f.map(), &[1, 1]);

        let text = format!(
            r#"{{
  "source": {},
  "target": {},
  "map": {{ "p": "q" }}
}}"#,
            z2_json(),
            z2_json()
        );
        let doc: FunctorDoc = serde_json::from_str(&text).unwrap();
        assert!(functor_from_doc(&doc, None).is_err());
    }

    #[test]
    fn document_detection() {
        assert!(matches!(
            parse_document(&z2_json()).unwrap(),
            Document::Space(_)
        ));
        let module = format!(
            r#"{{ "space": {}, "side": "left", "values": ["0", "0"] }}"#,
            z2_json()
        );
        assert!(matches!(
            parse_document(&module).unwrap(),
            Document::Module(_)
        ));
        assert!(parse_document("[1, 2]").is_err());
        assert!(parse_document(r#"{ "foo": 1 }"#).is_err());
    }

    #[test]
    fn space_path_reference() {
        let dir = std::env::temp_dir().join("lawvere-doc-test");
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("z2.json"), z2_json()).unwrap();
        let space = resolve_space(&SpaceRef::Path("z2.json".into()), Some(&dir)).unwrap();
        assert_eq!(space.object_count(), 2);
    }

    proptest! {
        #[test]
        fn value_text_round_trips(num in 0u64..10_000, den in 1u64..10_000) {
            let v = crate::quantale::CostValue::ratio(num, den);
            let text = v.to_string();
            let back: crate::quantale::CostValue = text.parse().unwrap();
            prop_assert_eq!(v, back);
        }

        #[test]
        fn space_doc_round_trips(seed in 0u64..500) {
            let mut rng = crate::generate::rng(seed);
            let grid = crate::generate::default_cost_grid();
            let space = crate::generate::random_space(
                &mut rng,
                crate::quantale::Base::Cost,
                1 + (seed as usize % 4),
                &grid,
            );
            let rendered = to_json_pretty(&space_to_doc(&space));
            let doc: SpaceDoc = serde_json::from_str(&rendered).unwrap();
            prop_assert_eq!(space_from_doc(&doc).unwrap(), space);
        }
    }
}
