//! JSON documents exchanged by the command-line tool, all tagged with
//! `"schema": "kql/1"`. Keys are emitted in a fixed order so that output is
//! byte-stable.
//!
//! Decoding errors name the offending field as a JSON pointer.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::descent::InvariantIdeal;
use crate::error::{Error, Result};
use crate::linalg::{Complex, Matrix, Rational, Scalar};
use crate::mckay::{framed_mckay_quiver, DimensionVector, GroupSpec};
use crate::monad::{EquivariantIdeal, MonadData, SupportCycle, COORDS};
use crate::pi_module::{AdhmDatum, QuiverModule};
use crate::poly::{parse_poly, Ring};
use crate::stability::StabilityParameter;

pub const SCHEMA: &str = "kql/1";

/// Scalars that can be written to and read from documents.
pub trait JsonScalar: Scalar + Serialize + DeserializeOwned {}
impl JsonScalar for Rational {}
impl JsonScalar for Complex {}

/// A module over either scalar field, as read from a document.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyModule {
    Rational(QuiverModule<Rational>),
    Complex(QuiverModule<Complex>),
}

/// ADHM data over either scalar field.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAdhm {
    Rational(AdhmDatum<Rational>),
    Complex(AdhmDatum<Complex>),
}

/// Starts a document of the given kind.
pub fn document(kind: &str) -> Map<String, Value> {
    let mut doc = Map::new();
    doc.insert("schema".into(), json!(SCHEMA));
    doc.insert("kind".into(), json!(kind));
    doc
}

fn invalid(pointer: &str, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("{pointer}: {msg}"))
}

fn field<'a>(doc: &'a Map<String, Value>, pointer: &str, key: &str) -> Result<&'a Value> {
    doc.get(key).ok_or_else(|| invalid(&format!("{pointer}/{key}"), "missing field"))
}

fn typed<T: DeserializeOwned>(doc: &Map<String, Value>, pointer: &str, key: &str) -> Result<T> {
    let v = field(doc, pointer, key)?;
    serde_json::from_value(v.clone()).map_err(|e| invalid(&format!("{pointer}/{key}"), e))
}

fn object<'a>(v: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| invalid(pointer, "expected an object"))
}

/// Parses text into a document and checks the schema tag and kind.
pub fn parse_document(text: &str, kind: &str) -> Result<Map<String, Value>> {
    let v: Value = serde_json::from_str(text).map_err(|e| invalid("", format!("not JSON: {e}")))?;
    let doc = object(&v, "")?.clone();
    check_header(&doc, kind)?;
    Ok(doc)
}

pub fn check_header(doc: &Map<String, Value>, kind: &str) -> Result<()> {
    let schema: String = typed(doc, "", "schema")?;
    if schema != SCHEMA {
        return Err(invalid("/schema", format!("expected {SCHEMA:?}, found {schema:?}")));
    }
    if let Some(k) = doc.get("kind") {
        if k != kind {
            return Err(invalid("/kind", format!("expected {kind:?}, found {k}")));
        }
    }
    Ok(())
}

fn matrix_value<S: JsonScalar>(m: &Matrix<S>) -> Value {
    serde_json::to_value(m.to_repr()).expect("matrices serialise")
}

fn matrix_at<S: JsonScalar>(v: &Value, pointer: &str, rows: usize, cols: usize) -> Result<Matrix<S>> {
    let repr = serde_json::from_value(v.clone()).map_err(|e| invalid(pointer, e))?;
    Matrix::from_repr(repr, rows, cols).map_err(|e| invalid(pointer, e))
}

fn scalars_of(doc: &Map<String, Value>) -> Result<String> {
    match doc.get("scalars") {
        None => Ok(Rational::KIND.to_string()),
        Some(_) => {
            let s: String = typed(doc, "", "scalars")?;
            if s == Rational::KIND || s == Complex::KIND {
                Ok(s)
            } else {
                Err(invalid("/scalars", format!("expected {:?} or {:?}", Rational::KIND, Complex::KIND)))
            }
        }
    }
}

pub fn module_to_json<S: JsonScalar>(m: &QuiverModule<S>) -> Value {
    let mut doc = document("module");
    doc.insert("group".into(), json!(m.quiver.group()));
    doc.insert("r".into(), json!(m.quiver.r));
    doc.insert("scalars".into(), json!(S::KIND));
    doc.insert("dim".into(), json!({ "inf": m.dim.inf, "v": m.dim.v }));
    let mut arrows = Map::new();
    for (a, b) in m.quiver.arrows.iter().zip(&m.maps) {
        arrows.insert(a.id.clone(), matrix_value(b));
    }
    doc.insert("arrows".into(), Value::Object(arrows));
    Value::Object(doc)
}

impl AnyModule {
    pub fn to_json(&self) -> Value {
        match self {
            AnyModule::Rational(m) => module_to_json(m),
            AnyModule::Complex(m) => module_to_json(m),
        }
    }
}

pub fn module_from_json(doc: &Map<String, Value>) -> Result<AnyModule> {
    check_header(doc, "module")?;
    Ok(match scalars_of(doc)?.as_str() {
        "rational" => AnyModule::Rational(typed_module(doc)?),
        _ => AnyModule::Complex(typed_module(doc)?),
    })
}

pub fn typed_module<S: JsonScalar>(doc: &Map<String, Value>) -> Result<QuiverModule<S>> {
    let group: GroupSpec = typed(doc, "", "group")?;
    let r: usize = typed(doc, "", "r")?;
    let quiver = framed_mckay_quiver(group, r)?;
    let dim: DimensionVector = typed(doc, "", "dim")?;
    if dim.v.len() != quiver.base.num_vertices() {
        return Err(invalid("/dim/v", format!("expected {} entries", quiver.base.num_vertices())));
    }
    if dim.inf < 0 || dim.v.iter().any(|&d| d < 0) {
        return Err(invalid("/dim", "dimensions must be nonnegative"));
    }
    let arrows = object(field(doc, "", "arrows")?, "/arrows")?;
    if let Some(extra) = arrows.keys().find(|k| quiver.arrow_index(k).is_none()) {
        return Err(invalid(&format!("/arrows/{extra}"), "not an arrow of the framed quiver"));
    }
    let mut maps = Vec::with_capacity(quiver.arrows.len());
    for a in &quiver.arrows {
        let (rows, cols) = (dim.at(a.head) as usize, dim.at(a.tail) as usize);
        let pointer = format!("/arrows/{}", a.id);
        maps.push(match arrows.get(&a.id) {
            Some(v) => matrix_at(v, &pointer, rows, cols)?,
            None if rows == 0 || cols == 0 => Matrix::zeros(rows, cols),
            None => return Err(invalid(&pointer, "missing arrow")),
        });
    }
    QuiverModule::new(quiver, dim, maps)
}

pub fn adhm_to_json<S: JsonScalar>(d: &AdhmDatum<S>) -> Value {
    let mut doc = document("adhm");
    doc.insert("group".into(), json!(d.group()));
    doc.insert("r".into(), json!(d.r));
    doc.insert("scalars".into(), json!(S::KIND));
    doc.insert("weights".into(), json!(d.weights));
    doc.insert("B1".into(), matrix_value(&d.b1));
    doc.insert("B2".into(), matrix_value(&d.b2));
    doc.insert("i".into(), matrix_value(&d.i));
    doc.insert("j".into(), matrix_value(&d.j));
    Value::Object(doc)
}

impl AnyAdhm {
    pub fn to_json(&self) -> Value {
        match self {
            AnyAdhm::Rational(d) => adhm_to_json(d),
            AnyAdhm::Complex(d) => adhm_to_json(d),
        }
    }
}

pub fn adhm_from_json(doc: &Map<String, Value>) -> Result<AnyAdhm> {
    check_header(doc, "adhm")?;
    Ok(match scalars_of(doc)?.as_str() {
        "rational" => AnyAdhm::Rational(typed_adhm(doc)?),
        _ => AnyAdhm::Complex(typed_adhm(doc)?),
    })
}

pub fn typed_adhm<S: JsonScalar>(doc: &Map<String, Value>) -> Result<AdhmDatum<S>> {
    let group: GroupSpec = typed(doc, "", "group")?;
    let m = group.cyclic_order().ok_or_else(|| invalid("/group", "ADHM form needs a cyclic group"))?;
    let r: usize = typed(doc, "", "r")?;
    let weights: Vec<usize> = typed(doc, "", "weights")?;
    let n = weights.len();
    let b1 = matrix_at(field(doc, "", "B1")?, "/B1", n, n)?;
    let b2 = matrix_at(field(doc, "", "B2")?, "/B2", n, n)?;
    let i = matrix_at(field(doc, "", "i")?, "/i", n, r)?;
    let j = matrix_at(field(doc, "", "j")?, "/j", r, n)?;
    AdhmDatum::new(m, r, weights, b1, b2, i, j)
}

pub fn stability_to_json(t: &StabilityParameter) -> Value {
    let mut doc = document("stability");
    doc.insert("theta_inf".into(), json!(t.theta_inf));
    doc.insert("theta".into(), json!(t.theta));
    doc.insert("positivity_set".into(), json!(t.positivity_set));
    Value::Object(doc)
}

pub fn stability_from_json(doc: &Map<String, Value>) -> Result<StabilityParameter> {
    check_header(doc, "stability")?;
    let t = StabilityParameter {
        theta_inf: typed(doc, "", "theta_inf")?,
        theta: typed(doc, "", "theta")?,
        positivity_set: typed(doc, "", "positivity_set")?,
    };
    t.validate()?;
    Ok(t)
}

pub fn ideal_to_json(ideal: &EquivariantIdeal<Rational>) -> Value {
    let mut doc = document("ideal");
    doc.insert("group".into(), json!(GroupSpec::A(ideal.m as u32)));
    doc.insert("variables".into(), json!(["x", "y"]));
    doc.insert("generators".into(), json!(ideal.generator_strings()));
    doc.insert("colength".into(), json!(ideal.colength()));
    Value::Object(doc)
}

pub fn ideal_from_json(doc: &Map<String, Value>) -> Result<EquivariantIdeal<Rational>> {
    check_header(doc, "ideal")?;
    let group: GroupSpec = typed(doc, "", "group")?;
    let m = group.cyclic_order().ok_or_else(|| invalid("/group", "ideals need a cyclic group"))?;
    if let Some(vars) = doc.get("variables") {
        if vars != &json!(["x", "y"]) {
            return Err(invalid("/variables", "expected [\"x\", \"y\"]"));
        }
    }
    let texts: Vec<String> = typed(doc, "", "generators")?;
    let ring = Ring::xy();
    let mut gens = Vec::with_capacity(texts.len());
    for (k, t) in texts.iter().enumerate() {
        gens.push(parse_poly(&ring, t).map_err(|e| invalid(&format!("/generators/{k}"), e))?);
    }
    EquivariantIdeal::new(m, gens).map_err(|e| match e {
        Error::Invalid(msg) => invalid("/generators", msg),
        other => other,
    })
}

pub fn invariant_ideal_to_json(j: &InvariantIdeal<Rational>) -> Value {
    let mut doc = document("invariant_ideal");
    doc.insert("m".into(), json!(j.presentation.m));
    doc.insert("variables".into(), json!(["w", "u", "v"]));
    doc.insert("relation".into(), json!(j.presentation.relation::<Rational>().to_text()));
    doc.insert("generators".into(), json!(j.generator_strings()));
    doc.insert("colength".into(), json!(j.colength()));
    Value::Object(doc)
}

pub fn monad_to_json<S: JsonScalar>(md: &MonadData<S>) -> Value {
    let mut doc = document("monad");
    let (a, b, c) = md.term_dims();
    doc.insert("scalars".into(), json!(S::KIND));
    doc.insert("dims".into(), json!([a, b, c]));
    let tensor = |mats: &[Matrix<S>; 3]| {
        let mut t = Map::new();
        for (name, m) in COORDS.iter().zip(mats) {
            t.insert(name.to_string(), matrix_value(m));
        }
        Value::Object(t)
    };
    doc.insert("A".into(), tensor(&md.a));
    doc.insert("B".into(), tensor(&md.b));
    Value::Object(doc)
}

pub fn support_to_json(cycle: &SupportCycle) -> Value {
    let mut doc = document("support_cycle");
    doc.insert("points".into(), json!(cycle));
    doc.insert("total_multiplicity".into(), json!(cycle.total_multiplicity()));
    Value::Object(doc)
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{free_orbit_ideal, witness_module};
    use crate::pi_module::quiver_to_adhm;
    use crate::stability::c_plus_representative;

    fn q(a: i64) -> Rational {
        Rational::integer(a)
    }

    fn reparse(v: &Value) -> Map<String, Value> {
        v.as_object().unwrap().clone()
    }

    #[test]
    fn module_roundtrip_is_byte_stable() {
        let m = witness_module::<Rational>(GroupSpec::A(3), &[(q(1), q(2))], 2).unwrap();
        let text = render(&module_to_json(&m));
        let back = module_from_json(&parse_document(&text, "module").unwrap()).unwrap();
        assert_eq!(back, AnyModule::Rational(m));
        assert_eq!(render(&back.to_json()), text);
    }

    #[test]
    fn complex_module_roundtrip() {
        let m = witness_module::<Complex>(GroupSpec::A(2), &[(q(1), q(2))], 1).unwrap();
        let v = module_to_json(&m);
        assert_eq!(v["scalars"], "complex");
        assert_eq!(module_from_json(&reparse(&v)).unwrap(), AnyModule::Complex(m));
    }

    #[test]
    fn adhm_roundtrip() {
        let m = witness_module::<Rational>(GroupSpec::A(2), &[(q(1), q(2))], 1).unwrap();
        let d = quiver_to_adhm(&m).unwrap();
        let v = adhm_to_json(&d);
        assert_eq!(adhm_from_json(&reparse(&v)).unwrap(), AnyAdhm::Rational(d));
    }

    #[test]
    fn bad_fields_are_located() {
        let m = witness_module::<Rational>(GroupSpec::A(2), &[(q(1), q(2))], 1).unwrap();
        let mut v = module_to_json(&m);
        v["arrows"]["b1"] = json!([["1", "2"]]);
        let err = module_from_json(&reparse(&v)).unwrap_err().to_string();
        assert!(err.contains("/arrows/b1"), "{err}");
        v["schema"] = json!("kql/0");
        assert!(module_from_json(&reparse(&v)).unwrap_err().to_string().contains("/schema"));
        assert!(parse_document("[1]", "module").is_err());
    }

    #[test]
    fn stability_and_ideal_roundtrip() {
        let t = c_plus_representative(&[2, 2]);
        assert_eq!(stability_from_json(&reparse(&stability_to_json(&t))).unwrap(), t);
        let i = free_orbit_ideal::<Rational>(2, &q(1), &q(2)).unwrap();
        let v = ideal_to_json(&i);
        assert_eq!(v["generators"], json!(["x - 1/2*y", "y^2 - 4"]));
        assert_eq!(ideal_from_json(&reparse(&v)).unwrap(), i);
        let mut bad = v.clone();
        bad["generators"] = json!(["x + 1"]);
        assert!(ideal_from_json(&reparse(&bad)).unwrap_err().to_string().contains("/generators"));
    }
}
