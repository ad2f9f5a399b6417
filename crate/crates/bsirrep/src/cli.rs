//! Serialization and front-end plumbing: the JSON schemas emitted and
//! consumed by the command-line tool, the exact-scalar literal grammar, and
//! ASCII table rendering.
//!
//! All integers serialize as decimal strings; q^dim - p^dim outgrows 53-bit
//! float precision almost immediately.

use crate::classify::{ClassRecord, ClassificationReport};
use crate::cyclotomic::{zeta, CycNum, Rational};
use crate::error::{Error, Result};
use crate::exactlinalg::CycMatrix;
use crate::repcore::{BSParams, MatrixPair, RepSpec};
use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// JSON document types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

/// A cyclotomic literal: power-basis coordinates in Q(zeta_order).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycLitJson {
    pub order: u64,
    pub coeffs: Vec<RationalJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatricesJson {
    pub a: Vec<Vec<CycLitJson>>,
    pub b: Vec<Vec<CycLitJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatRenderJson {
    pub a: Vec<Vec<ComplexJson>>,
    pub b: Vec<Vec<ComplexJson>>,
}

/// One constructed representation, lossless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepRecordJson {
    pub p: String,
    pub q: String,
    pub dim: String,
    pub ell: String,
    pub t: String,
    pub s: String,
    pub c: CycLitJson,
    pub matrices: MatricesJson,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub float_render: Option<FloatRenderJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub p: String,
    pub q: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub prime: String,
    pub exponent: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordJson {
    pub ell: String,
    pub s: String,
    pub irreducible: bool,
    pub orbit_size: String,
    pub class_count: String,
    pub orbit_reps: Vec<String>,
}

/// A full classification report, mirroring [`ClassificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub params: ParamsJson,
    pub dim: String,
    pub modulus: String,
    pub factorization: Vec<FactorJson>,
    pub records: Vec<RecordJson>,
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

fn rational_to_json(r: &Rational) -> RationalJson {
    RationalJson {
        num: r.numer().to_string(),
        den: r.denom().to_string(),
    }
}

fn rational_from_json(j: &RationalJson) -> Result<Rational> {
    let num: BigInt = j.num.parse().map_err(|_| Error::Parse(format!("bad numerator {:?}", j.num)))?;
    let den: BigInt = j.den.parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", j.den)))?;
    if den == BigInt::from(0) {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(Rational::new(num, den))
}

pub fn cycnum_to_json(x: &CycNum) -> CycLitJson {
    CycLitJson {
        order: x.order(),
        coeffs: x.coeffs_rational().iter().map(rational_to_json).collect(),
    }
}

pub fn cycnum_from_json(j: &CycLitJson) -> Result<CycNum> {
    let coeffs = j
        .coeffs
        .iter()
        .map(rational_from_json)
        .collect::<Result<Vec<_>>>()?;
    CycNum::from_coeffs(j.order, &coeffs)
}

fn matrix_to_json(m: &CycMatrix) -> Vec<Vec<CycLitJson>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| cycnum_to_json(m.get(i, j))).collect())
        .collect()
}

fn matrix_from_json(rows: &[Vec<CycLitJson>], order: u64) -> Result<CycMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    let mut entries = Vec::with_capacity(nrows * ncols);
    for row in rows {
        if row.len() != ncols {
            return Err(Error::Parse("ragged matrix rows".into()));
        }
        for lit in row {
            entries.push(cycnum_from_json(lit)?.change_order(order)?);
        }
    }
    CycMatrix::new(nrows, ncols, order, entries)
}

/// Rounds to 15 significant digits, half-even, for reproducible renderings.
pub fn round_sig15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().unwrap()
}

fn float_render(m: &CycMatrix) -> Vec<Vec<ComplexJson>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let (re, im) = m.get(i, j).to_complex();
                    ComplexJson {
                        re: round_sig15(re),
                        im: round_sig15(im),
                    }
                })
                .collect()
        })
        .collect()
}

pub fn rep_record_to_json(spec: &RepSpec, pair: &MatrixPair, with_float: bool) -> RepRecordJson {
    RepRecordJson {
        p: spec.params.p().to_string(),
        q: spec.params.q().to_string(),
        dim: spec.dim.to_string(),
        ell: spec.ell.to_string(),
        t: spec.t.to_string(),
        s: spec.s.to_string(),
        c: cycnum_to_json(&spec.c),
        matrices: MatricesJson {
            a: matrix_to_json(&pair.a),
            b: matrix_to_json(&pair.b),
        },
        float_render: if with_float {
            Some(FloatRenderJson {
                a: float_render(&pair.a),
                b: float_render(&pair.b),
            })
        } else {
            None
        },
    }
}

fn parse_decimal<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad {what}: {s:?}")))
}

/// Reconstructs the spec and the (possibly hand-edited) matrices from a
/// record. The matrices are taken from the file, not rebuilt, so that
/// verification detects corruption.
pub fn rep_record_from_json(j: &RepRecordJson) -> Result<(RepSpec, MatrixPair)> {
    let p: BigInt = parse_decimal(&j.p, "p")?;
    let q: BigInt = parse_decimal(&j.q, "q")?;
    let params = BSParams::new(p, q)?;
    let dim: u32 = parse_decimal(&j.dim, "dim")?;
    let ell: u64 = parse_decimal(&j.ell, "ell")?;
    let t: u64 = parse_decimal(&j.t, "t")?;
    let c = cycnum_from_json(&j.c)?;
    let spec = RepSpec::new_unchecked(params, dim, ell, t, c)?;
    let declared_s: u64 = parse_decimal(&j.s, "s")?;
    if declared_s != spec.s {
        return Err(Error::Parse(format!(
            "file declares s = {declared_s} but q s = p (mod {ell}) forces s = {}",
            spec.s
        )));
    }
    let mut order = ell.lcm(&spec.c.order());
    for row in j.matrices.a.iter().chain(&j.matrices.b) {
        for lit in row {
            order = order.lcm(&lit.order);
        }
    }
    let a = matrix_from_json(&j.matrices.a, order)?;
    let b = matrix_from_json(&j.matrices.b, order)?;
    if a.rows() != dim as usize || !a.is_square() || b.rows() != dim as usize || !b.is_square() {
        return Err(Error::Parse("matrix shapes disagree with dim".into()));
    }
    Ok((spec, MatrixPair { a, b, order, ell }))
}

pub fn report_to_json(report: &ClassificationReport) -> ReportJson {
    ReportJson {
        params: ParamsJson {
            p: report.params.p().to_string(),
            q: report.params.q().to_string(),
        },
        dim: report.dim.to_string(),
        modulus: report.modulus.to_string(),
        factorization: report
            .factorization
            .factors()
            .iter()
            .map(|(p, e)| FactorJson {
                prime: p.to_string(),
                exponent: e.to_string(),
            })
            .collect(),
        records: report.records.iter().map(record_to_json).collect(),
    }
}

fn record_to_json(r: &ClassRecord) -> RecordJson {
    RecordJson {
        ell: r.ell.to_string(),
        s: r.s.to_string(),
        irreducible: r.irreducible,
        orbit_size: r.orbit_size.to_string(),
        class_count: r.class_count.to_string(),
        orbit_reps: r.orbit_reps.iter().map(u64::to_string).collect(),
    }
}

// ---------------------------------------------------------------------------
// The c-literal grammar
// ---------------------------------------------------------------------------

/// Parses the exact-scalar grammar: a '*'-joined product of factors, each a
/// rational ("3/2", "-1") or a root of unity ("zeta(8)", "zeta(8)^3").
pub fn parse_c_literal(input: &str) -> Result<CycNum> {
    let mut acc = CycNum::one(1);
    for raw in input.split('*') {
        let tok = raw.trim();
        if tok.is_empty() {
            return Err(Error::Parse(format!("empty factor in {input:?}")));
        }
        let factor = if let Some(rest) = tok.strip_prefix("zeta(") {
            let (order_str, tail) = rest
                .split_once(')')
                .ok_or_else(|| Error::Parse(format!("unclosed zeta in {tok:?}")))?;
            let order: u64 = order_str
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad zeta order in {tok:?}")))?;
            if order == 0 {
                return Err(Error::Parse("zeta order must be >= 1".into()));
            }
            let exp: i64 = match tail.trim() {
                "" => 1,
                t => t
                    .strip_prefix('^')
                    .and_then(|e| e.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad zeta exponent in {tok:?}")))?,
            };
            zeta(order, exp)
        } else {
            let (num_str, den_str) = match tok.split_once('/') {
                Some((n, d)) => (n.trim(), d.trim()),
                None => (tok, "1"),
            };
            let num: BigInt = num_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational {tok:?}")))?;
            let den: BigInt = den_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational {tok:?}")))?;
            if den == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            CycNum::from_rational(1, &Rational::new(num, den))
        };
        let m = acc.order().lcm(&factor.order());
        acc = acc.change_order(m)?.mul(&factor.change_order(m)?)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

/// Locale-independent ASCII table of a classification report.
pub fn render_report_table(report: &ClassificationReport) -> String {
    let mut out = String::new();
    let factor_str = report
        .factorization
        .factors()
        .iter()
        .map(|(p, e)| {
            if *e == 1 {
                p.to_string()
            } else {
                format!("{p}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join(" * ");
    out.push_str(&format!(
        "BS({}, {})  dim {}  modulus q^dim - p^dim = {} = {}\n",
        report.params.p(),
        report.params.q(),
        report.dim,
        report.modulus,
        if factor_str.is_empty() { "1".to_string() } else { factor_str },
    ));
    out.push_str("ell        s          irreducible  orbit_size  class_count  orbit_reps\n");
    out.push_str("---------  ---------  -----------  ----------  -----------  ----------\n");
    for r in &report.records {
        let reps = r
            .orbit_reps
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        out.push_str(&format!(
            "{:<9}  {:<9}  {:<11}  {:<10}  {:<11}  {}\n",
            r.ell,
            r.s,
            if r.irreducible { "yes" } else { "no" },
            r.orbit_size,
            r.class_count,
            reps
        ));
    }
    out
}
