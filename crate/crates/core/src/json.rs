//! JSON encodings for matrices, curves, loops and coverings.
//!
//! Matrix format:
//! `{"variables":["z","w"], "conjugates":{"zb":"z"}, "rows":n, "cols":m,
//!   "entries":[[ [ {"re":"p/q","im":"r/s","exps":[..]}, .. ] ]]}`
//! with one term list per entry. An optional `"denominator"` term list
//! turns it into a [`FracMatrix`]. Rationals are `"p/q"` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::scalar::format_rational;
use crate::algebra::{FracMatrix, Matrix, MatrixFamily, MultiPoly, PointedRational, Scalar, UPoly, VarContext};
use crate::cocycle::{Chart, Covering, MatrixCocycle, SamplePoint, Splitting};
use crate::curves::CurveSpec;
use crate::error::{Error, ParseError, Result};

fn json_error(e: serde_json::Error) -> ParseError {
    ParseError::Json(format!("line {} column {}: {e}", e.line(), e.column()))
}

pub fn parse_value(text: &str) -> Result<Value, ParseError> {
    serde_json::from_str(text).map_err(json_error)
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value, field: &str) -> Result<T, ParseError> {
    T::deserialize(v).map_err(|e| ParseError::field(field, e.to_string()))
}

/// A scalar as `"p/q"` (real) or `{"re":"p/q","im":"r/s"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarJson {
    Real(String),
    Int(i64),
    Complex {
        re: String,
        #[serde(default = "zero_str")]
        im: String,
    },
}

fn zero_str() -> String {
    "0".into()
}

impl ScalarJson {
    fn parse(&self, field: &str) -> Result<Scalar, ParseError> {
        let wrap = |e: ParseError| ParseError::field(field, e.to_string());
        match self {
            ScalarJson::Real(s) => s.parse().map_err(wrap),
            ScalarJson::Int(n) => Ok(Scalar::from_int(*n)),
            ScalarJson::Complex { re, im } => Scalar::parse_parts(re, im).map_err(wrap),
        }
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    json!({"re": format_rational(s.re()), "im": format_rational(s.im())})
}

pub fn scalar_from_json(v: &Value, field: &str) -> Result<Scalar, ParseError> {
    from_value::<ScalarJson>(v, field)?.parse(field)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct TermJson {
    re: String,
    #[serde(default = "zero_str")]
    im: String,
    exps: Vec<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    conjugates: BTreeMap<String, String>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Vec<TermJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    denominator: Option<Vec<TermJson>>,
}

fn context_from(vars: &[String], conj: &BTreeMap<String, String>) -> Result<Arc<VarContext>, ParseError> {
    let pairs: Vec<(String, String)> = conj.iter().map(|(c, b)| (c.clone(), b.clone())).collect();
    VarContext::with_conjugates(vars, &pairs)
}

fn poly_from_terms(ctx: &Arc<VarContext>, terms: &[TermJson], field: &str) -> Result<MultiPoly, ParseError> {
    let mut out = Vec::with_capacity(terms.len());
    for (k, t) in terms.iter().enumerate() {
        let f = format!("{field}[{k}]");
        let c = Scalar::parse_parts(&t.re, &t.im).map_err(|e| ParseError::field(&f, e.to_string()))?;
        if t.exps.len() != ctx.nvars() {
            return Err(ParseError::field(
                format!("{f}.exps"),
                format!("expected {} exponents, got {}", ctx.nvars(), t.exps.len()),
            ));
        }
        out.push((t.exps.clone(), c));
    }
    MultiPoly::from_terms(ctx, out).map_err(|e| ParseError::field(field, e.to_string()))
}

fn terms_of(p: &MultiPoly) -> Vec<TermJson> {
    p.terms()
        .iter()
        .map(|(e, c)| TermJson { re: format_rational(c.re()), im: format_rational(c.im()), exps: e.clone() })
        .collect()
}

fn decode_matrix(m: &MatrixJson, default_ctx: Option<&Arc<VarContext>>) -> Result<(MatrixFamily, Option<MultiPoly>), ParseError> {
    let ctx = match (&m.variables, default_ctx) {
        (Some(v), None) => context_from(v, &m.conjugates)?,
        (Some(v), Some(d)) => {
            let c = context_from(v, &m.conjugates)?;
            if c != *d {
                return Err(ParseError::field("variables", "do not match the enclosing variables"));
            }
            d.clone()
        }
        (None, Some(d)) => d.clone(),
        (None, None) => return Err(ParseError::field("variables", "missing")),
    };
    if m.entries.len() != m.rows {
        return Err(ParseError::field("entries", format!("expected {} rows, got {}", m.rows, m.entries.len())));
    }
    let mut data = Vec::with_capacity(m.rows * m.cols);
    for (i, row) in m.entries.iter().enumerate() {
        if row.len() != m.cols {
            return Err(ParseError::field(format!("entries[{i}]"), format!("expected {} columns, got {}", m.cols, row.len())));
        }
        for (j, terms) in row.iter().enumerate() {
            data.push(poly_from_terms(&ctx, terms, &format!("entries[{i}][{j}]"))?);
        }
    }
    let denom = m.denominator.as_ref().map(|d| poly_from_terms(&ctx, d, "denominator")).transpose()?;
    Ok((Matrix::from_vec(m.rows, m.cols, data), denom))
}

fn encode(m: &MatrixFamily, denom: Option<&MultiPoly>, with_vars: bool) -> Value {
    let ctx = m.context().cloned().or_else(|| denom.map(|d| d.ctx().clone()));
    let (variables, conjugates) = match (&ctx, with_vars) {
        (Some(c), true) => (Some(c.names().to_vec()), c.conjugate_pairs().into_iter().collect()),
        _ => (None, BTreeMap::new()),
    };
    let mj = MatrixJson {
        variables,
        conjugates,
        rows: m.rows(),
        cols: m.cols(),
        entries: (0..m.rows()).map(|i| (0..m.cols()).map(|j| terms_of(m.get(i, j))).collect()).collect(),
        denominator: denom.map(terms_of),
    };
    serde_json::to_value(mj).expect("serializable")
}

pub fn matrix_to_json(m: &MatrixFamily) -> Value {
    encode(m, None, true)
}

pub fn frac_to_json(m: &FracMatrix) -> Value {
    encode(m.numer(), Some(m.denom()), true)
}

/// Polynomial matrix; a `"denominator"` other than `1` is rejected.
pub fn matrix_from_json(v: &Value) -> Result<MatrixFamily, ParseError> {
    let (m, d) = decode_matrix(&from_value(v, "matrix")?, None)?;
    if d.is_some_and(|d| !(d.is_constant() && d.constant_term().is_one())) {
        return Err(ParseError::field("denominator", "a polynomial matrix cannot have a denominator"));
    }
    Ok(m)
}

pub fn frac_from_json(v: &Value) -> Result<FracMatrix, ParseError> {
    frac_in_context(v, None)
}

fn frac_in_context(v: &Value, ctx: Option<&Arc<VarContext>>) -> Result<FracMatrix, ParseError> {
    let (m, d) = decode_matrix(&from_value(v, "matrix")?, ctx)?;
    let c = ctx.cloned().or_else(|| m.context().cloned()).ok_or_else(|| ParseError::field("entries", "empty matrix"))?;
    let d = d.unwrap_or_else(|| MultiPoly::one(&c));
    FracMatrix::new(m, d).map_err(|e| ParseError::field("denominator", e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<MatrixFamily, ParseError> {
    matrix_from_json(&parse_value(text)?)
}

/// Constant matrix, given either in the matrix format (all terms constant)
/// or as a grid of scalars.
pub fn scalar_matrix_from_json(v: &Value) -> Result<Matrix<Scalar>, ParseError> {
    if v.is_array() {
        let grid: Vec<Vec<ScalarJson>> = from_value(v, "matrix")?;
        let cols = grid.first().map_or(0, Vec::len);
        let mut rows = Vec::with_capacity(grid.len());
        for (i, r) in grid.iter().enumerate() {
            if r.len() != cols {
                return Err(ParseError::field(format!("[{i}]"), "ragged rows"));
            }
            rows.push(r.iter().enumerate().map(|(j, s)| s.parse(&format!("[{i}][{j}]"))).collect::<Result<Vec<_>, _>>()?);
        }
        return Ok(Matrix::from_rows(rows));
    }
    let m = matrix_from_json(v)?;
    m.try_map(|p| if p.is_constant() { Ok(p.constant_term()) } else { Err(()) })
        .map_err(|_| ParseError::field("entries", "expected constant entries"))
}

pub fn scalar_matrix_to_json(m: &Matrix<Scalar>) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect())).collect())
}

fn upoly_to_json(p: &UPoly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

/// Germ grid: each entry `{"num":[c0,c1,..], "den":[..]}` in powers of the
/// variable, plus the base point.
pub fn pointed_grid_to_json(m: &Matrix<PointedRational>) -> Value {
    let base = m.data().first().map(|e| scalar_to_json(e.base())).unwrap_or(Value::Null);
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                m.row(i)
                    .iter()
                    .map(|e| json!({"num": upoly_to_json(e.numerator()), "den": upoly_to_json(e.denominator())}))
                    .collect(),
            )
        })
        .collect();
    json!({"base": base, "rows": m.rows(), "cols": m.cols(), "entries": entries})
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CurveJson {
    Full,
    Cusp { p: u32, q: u32 },
    Lines { slopes: Vec<ScalarJson> },
}

pub fn curve_from_json(v: &Value) -> Result<CurveSpec> {
    match from_value::<CurveJson>(v, "curve")? {
        CurveJson::Full => Ok(CurveSpec::FullGerm),
        CurveJson::Cusp { p, q } => CurveSpec::cusp(p, q),
        CurveJson::Lines { slopes } => {
            let s = slopes.iter().enumerate().map(|(k, s)| s.parse(&format!("slopes[{k}]"))).collect::<Result<Vec<_>, _>>()?;
            CurveSpec::lines(s)
        }
    }
}

pub fn curve_to_json(c: &CurveSpec) -> Value {
    match c {
        CurveSpec::FullGerm => json!({"kind": "full"}),
        CurveSpec::MonomialCusp { p, q } => json!({"kind": "cusp", "p": p, "q": q}),
        CurveSpec::LineUnion { slopes } => json!({"kind": "lines", "slopes": slopes.iter().map(scalar_to_json).collect::<Vec<_>>()}),
    }
}

/// `[[re, im], ...]`.
pub fn loop_from_json(v: &Value) -> Result<Vec<Complex64>, ParseError> {
    let pts: Vec<[f64; 2]> = from_value(v, "loop")?;
    Ok(pts.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

pub fn loop_to_json(samples: &[Complex64]) -> Value {
    Value::Array(samples.iter().map(|z| json!([z.re, z.im])).collect())
}

#[derive(Deserialize)]
struct ChartJson {
    name: String,
    samples: Vec<Vec<ScalarJson>>,
}

#[derive(Deserialize)]
struct OverlapJson {
    charts: [String; 2],
    samples: Vec<Vec<ScalarJson>>,
}

#[derive(Deserialize)]
struct EntryJson {
    from: String,
    to: String,
    matrix: Value,
}

#[derive(Deserialize)]
struct CoveringJson {
    variables: Vec<String>,
    #[serde(default)]
    conjugates: BTreeMap<String, String>,
    size: usize,
    charts: Vec<ChartJson>,
    #[serde(default)]
    overlaps: Vec<OverlapJson>,
    #[serde(default)]
    entries: Vec<EntryJson>,
    #[serde(default)]
    a: Option<Value>,
    #[serde(default)]
    b: Option<Value>,
    #[serde(default)]
    locals: Option<BTreeMap<String, Value>>,
    #[serde(default)]
    splitting: Option<BTreeMap<String, Value>>,
}

/// Everything a covering file may carry: the cocycle, and optionally the
/// pair `(A, B)`, local similarities and a splitting (all keyed by chart
/// name, all in the top-level variables). With local similarities and no
/// `entries`, the cocycle is their coboundary `H_i·H_j⁻¹`.
#[derive(Clone, Debug)]
pub struct CoveringData {
    pub cocycle: MatrixCocycle,
    pub a: Option<MatrixFamily>,
    pub b: Option<MatrixFamily>,
    pub locals: Option<Vec<FracMatrix>>,
    pub splitting: Option<Splitting>,
}

fn points(raw: &[Vec<ScalarJson>], field: &str) -> Result<Vec<SamplePoint>, ParseError> {
    raw.iter()
        .enumerate()
        .map(|(k, p)| p.iter().enumerate().map(|(c, s)| s.parse(&format!("{field}[{k}][{c}]"))).collect())
        .collect()
}

fn per_chart(cov: &Covering, map: &BTreeMap<String, Value>, field: &str) -> Result<Vec<FracMatrix>> {
    let mut out = Vec::with_capacity(cov.len());
    for c in cov.charts() {
        let v = map.get(&c.name).ok_or_else(|| ParseError::field(field, format!("missing chart {}", c.name)))?;
        out.push(frac_in_context(v, Some(cov.context())).map_err(|e| ParseError::field(format!("{field}.{}", c.name), e.to_string()))?);
    }
    Ok(out)
}

pub fn covering_from_json(v: &Value) -> Result<CoveringData> {
    let cj: CoveringJson = from_value(v, "covering")?;
    let ctx = context_from(&cj.variables, &cj.conjugates)?;
    let mut charts = Vec::with_capacity(cj.charts.len());
    for (k, c) in cj.charts.iter().enumerate() {
        charts.push(Chart { name: c.name.clone(), samples: points(&c.samples, &format!("charts[{k}].samples"))? });
    }
    let index = |name: &str, field: &str| {
        charts.iter().position(|c| c.name == name).ok_or_else(|| ParseError::field(field, format!("unknown chart {name:?}")))
    };
    let mut overlaps = Vec::with_capacity(cj.overlaps.len());
    for (k, o) in cj.overlaps.iter().enumerate() {
        let f = format!("overlaps[{k}]");
        overlaps.push((index(&o.charts[0], &f)?, index(&o.charts[1], &f)?, points(&o.samples, &format!("{f}.samples"))?));
    }
    let mut entries = BTreeMap::new();
    for (k, e) in cj.entries.iter().enumerate() {
        let f = format!("entries[{k}]");
        let key = (index(&e.from, &f)?, index(&e.to, &f)?);
        let m = frac_in_context(&e.matrix, Some(&ctx)).map_err(|err| ParseError::field(format!("{f}.matrix"), err.to_string()))?;
        entries.insert(key, m);
    }
    let cov = Covering::new(&ctx, charts, overlaps)?;
    let locals = cj.locals.as_ref().map(|m| per_chart(&cov, m, "locals")).transpose()?;
    // without explicit entries the cocycle is the coboundary of the locals
    let cocycle = match &locals {
        Some(h) if entries.is_empty() => MatrixCocycle::coboundary(cov.clone(), h)?,
        _ => MatrixCocycle::new(cov.clone(), cj.size, entries)?,
    };
    let poly = |v: &Option<Value>, field: &str| -> Result<Option<MatrixFamily>> {
        v.as_ref()
            .map(|v| {
                let f = frac_in_context(v, Some(&ctx)).map_err(|e| ParseError::field(field, e.to_string()))?;
                if !(f.denom().is_constant() && f.denom().constant_term().is_one()) {
                    return Err(ParseError::field(field, "must be a polynomial matrix").into());
                }
                Ok(f.numer().clone())
            })
            .transpose()
    };
    let a = poly(&cj.a, "a")?;
    let b = poly(&cj.b, "b")?;
    let splitting = cj.splitting.as_ref().map(|m| per_chart(&cov, m, "splitting").and_then(|h| Splitting::new(&cov, h))).transpose()?;
    Ok(CoveringData { cocycle, a, b, locals, splitting })
}

pub fn parse_covering(text: &str) -> Result<CoveringData> {
    covering_from_json(&parse_value(text).map_err(Error::from)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{"variables":["z"],"rows":2,"cols":2,"entries":[
        [[{"re":"1","exps":[1]}],[{"re":"1","im":"0","exps":[0]}]],
        [[],[]]]}"#;

    #[test]
    fn matrix_roundtrip() {
        let m = parse_matrix(EXAMPLE).unwrap();
        assert_eq!(m.get(0, 0), &MultiPoly::named(m.context().unwrap(), "z"));
        assert!(m.get(1, 1).is_zero());
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn conjugates_roundtrip() {
        let text = r#"{"variables":["z","zb"],"conjugates":{"zb":"z"},"rows":1,"cols":1,
            "entries":[[[{"re":"1/2","im":"-3","exps":[1,1]}]]]}"#;
        let m = parse_matrix(text).unwrap();
        assert!(m.uses_conjugates());
        assert_eq!(matrix_from_json(&matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn frac_roundtrip() {
        let ctx = VarContext::new(&["z"]);
        let z = MultiPoly::var(&ctx, 0);
        let f = FracMatrix::new(Matrix::from_rows(vec![vec![z.clone()]]), &z + &MultiPoly::one(&ctx)).unwrap();
        assert!(frac_from_json(&frac_to_json(&f)).unwrap().equals(&f));
        assert!(matrix_from_json(&frac_to_json(&f)).is_err());
    }

    #[test]
    fn field_diagnostics() {
        let bad = EXAMPLE.replace(r#""re":"1","exps":[1]"#, r#""re":"x","exps":[1]"#);
        let err = parse_matrix(&bad).unwrap_err().to_string();
        assert!(err.contains("entries[0][0][0]"), "{err}");
        let bad = EXAMPLE.replace("[1]}", "[1,2]}");
        assert!(parse_matrix(&bad).unwrap_err().to_string().contains("exps"));
        let err = parse_matrix("{\"rows\": 1,\n \"cols\": }").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn curves_and_loops() {
        for text in [r#"{"kind":"cusp","p":4,"q":3}"#, r#"{"kind":"lines","slopes":["1","2","3/2"]}"#, r#"{"kind":"full"}"#] {
            let c = curve_from_json(&parse_value(text).unwrap()).unwrap();
            assert_eq!(curve_from_json(&curve_to_json(&c)).unwrap(), c);
        }
        assert!(curve_from_json(&parse_value(r#"{"kind":"cusp","p":4,"q":2}"#).unwrap()).is_err());
        let l = loop_from_json(&parse_value("[[1,0],[0,1.5]]").unwrap()).unwrap();
        assert_eq!(l[1], Complex64::new(0.0, 1.5));
    }

    #[test]
    fn scalar_grids() {
        let m = scalar_matrix_from_json(&parse_value(r#"[["1","0"],[{"re":"0","im":"1"},2]]"#).unwrap()).unwrap();
        assert_eq!(m.get(1, 0), &Scalar::i());
        assert_eq!(scalar_matrix_from_json(&scalar_matrix_to_json(&m)).unwrap(), m);
    }

    #[test]
    fn covering_file() {
        let one = r#"{"rows":1,"cols":1,"entries":[[[{"re":"1","exps":[0]}]]]}"#;
        let two = r#"{"rows":1,"cols":1,"entries":[[[{"re":"2","exps":[0]}]]]}"#;
        let half = r#"{"rows":1,"cols":1,"entries":[[[{"re":"1/2","exps":[0]}]]]}"#;
        let text = format!(
            r#"{{"variables":["z"],"size":1,
            "charts":[{{"name":"1","samples":[["0"],["1"]]}},{{"name":"2","samples":[["1"]]}}],
            "overlaps":[{{"charts":["1","2"],"samples":[["1"]]}}],
            "entries":[{{"from":"1","to":"2","matrix":{two}}},{{"from":"2","to":"1","matrix":{half}}}],
            "a":{one},"b":{one},
            "locals":{{"1":{two},"2":{one}}},
            "splitting":{{"1":{two},"2":{one}}}}}"#
        );
        let d = parse_covering(&text).unwrap();
        assert!(crate::cocycle::verify_cocycle(&d.cocycle, Default::default()));
        assert_eq!(d.locals.unwrap().len(), 2);
        let err = parse_covering(&text.replace(r#""to":"1""#, r#""to":"9""#)).unwrap_err().to_string();
        assert!(err.contains("entries[1]"), "{err}");
    }
}
