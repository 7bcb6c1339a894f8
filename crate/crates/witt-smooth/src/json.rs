//! Canonical JSON encodings. Rationals are strings `"p"` or `"p/q"`;
//! direction indices `i` are 1-based.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use witt_smooth_core::gln::GlnModule;
use witt_smooth_core::linalg::Matrix;
use witt_smooth_core::module::{Family, ModuleVector};
use witt_smooth_core::{MultiIndex, P0Vector, Scalar, WeylElement, WittElement};

use crate::CliError;

/// A rational read from `"p/q"`, `"p"` or a JSON integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Scalar);

pub fn format_rational(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("bad rational {s:?}"))?;
    let den = BigInt::from_str(den).map_err(|_| format!("bad rational {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Scalar::new(num, den))
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
                parse_rational(v).map(Rat).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat(Scalar::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat(Scalar::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

fn rats(v: &[Scalar]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrat(v: Vec<Rat>) -> Vec<Scalar> {
    v.into_iter().map(|r| r.0).collect()
}

fn index(v: &[u32]) -> MultiIndex {
    MultiIndex::new(v.iter().copied())
}

#[derive(Serialize, Deserialize)]
struct WittTerm {
    alpha: Vec<u32>,
    i: usize,
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct WittDto {
    n: usize,
    terms: Vec<WittTerm>,
}

#[derive(Serialize, Deserialize)]
struct WeylTerm {
    beta: Vec<u32>,
    gamma: Vec<u32>,
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct WeylDto {
    n: usize,
    terms: Vec<WeylTerm>,
}

#[derive(Serialize, Deserialize)]
struct ScalarTerm {
    alpha: Vec<u32>,
    c: Rat,
}

#[derive(Serialize, Deserialize)]
struct P0Dto {
    n: usize,
    terms: Vec<ScalarTerm>,
}

#[derive(Serialize, Deserialize)]
struct GlnDto {
    n: usize,
    dim: usize,
    #[serde(rename = "E")]
    e: Vec<Vec<Vec<Rat>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct VectorTerm {
    alpha: Vec<u32>,
    c: Vec<Rat>,
}

#[derive(Serialize, Deserialize)]
struct VectorDto {
    #[serde(default)]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    terms: Vec<VectorTerm>,
}

fn decode<T: for<'de> Deserialize<'de>>(v: &Value, what: &str) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::Usage(format!("malformed {what}: {e}")))
}

fn encode<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("DTOs serialize")
}

fn check_len(n: usize, a: &[u32], what: &str) -> Result<(), CliError> {
    if a.len() != n {
        return Err(CliError::Usage(format!("{what} {a:?} does not have length {n}")));
    }
    Ok(())
}

fn direction(n: usize, i: usize) -> Result<usize, CliError> {
    if i == 0 || i > n {
        return Err(CliError::Usage(format!("direction {i} not in 1..={n}")));
    }
    Ok(i - 1)
}

pub fn multi_index_from(v: &Value) -> Result<MultiIndex, CliError> {
    let a: Vec<u32> = decode(v, "multi-index")?;
    Ok(index(&a))
}

pub fn multi_index_to(a: &MultiIndex) -> Value {
    encode(&a.exponents())
}

pub fn scalar_from(v: &Value) -> Result<Scalar, CliError> {
    Ok(decode::<Rat>(v, "rational")?.0)
}

pub fn scalar_to(x: &Scalar) -> Value {
    Value::String(format_rational(x))
}

pub fn scalars_from(v: &Value) -> Result<Vec<Scalar>, CliError> {
    Ok(unrat(decode(v, "rational list")?))
}

pub fn scalars_to(v: &[Scalar]) -> Value {
    encode(&rats(v))
}

pub fn matrix_to(m: &Matrix) -> Value {
    encode(&m.iter().map(|r| rats(r)).collect::<Vec<_>>())
}

pub fn matrix_from(v: &Value) -> Result<Matrix, CliError> {
    let rows: Vec<Vec<Rat>> = decode(v, "matrix")?;
    Ok(rows.into_iter().map(unrat).collect())
}

pub fn witt_from(v: &Value) -> Result<WittElement, CliError> {
    let dto: WittDto = decode(v, "Witt element")?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        check_len(dto.n, &t.alpha, "alpha")?;
        terms.push(((index(&t.alpha), direction(dto.n, t.i)?), t.c.0));
    }
    Ok(WittElement::from_terms(dto.n, terms)?)
}

pub fn witt_to(x: &WittElement) -> Value {
    encode(&WittDto {
        n: x.arity(),
        terms: x
            .terms()
            .map(|((a, i), c)| WittTerm {
                alpha: a.exponents().to_vec(),
                i: i + 1,
                c: Rat(c.clone()),
            })
            .collect(),
    })
}

pub fn weyl_from(v: &Value) -> Result<WeylElement, CliError> {
    let dto: WeylDto = decode(v, "Weyl element")?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        check_len(dto.n, &t.beta, "beta")?;
        check_len(dto.n, &t.gamma, "gamma")?;
        terms.push(((index(&t.beta), index(&t.gamma)), t.c.0));
    }
    Ok(WeylElement::from_terms(dto.n, terms)?)
}

pub fn weyl_to(a: &WeylElement) -> Value {
    encode(&WeylDto {
        n: a.arity(),
        terms: a
            .terms()
            .map(|((b, g), c)| WeylTerm {
                beta: b.exponents().to_vec(),
                gamma: g.exponents().to_vec(),
                c: Rat(c.clone()),
            })
            .collect(),
    })
}

pub fn p0_from(v: &Value) -> Result<P0Vector, CliError> {
    let dto: P0Dto = decode(v, "P0 vector")?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        check_len(dto.n, &t.alpha, "alpha")?;
        terms.push((index(&t.alpha), t.c.0));
    }
    Ok(P0Vector::from_terms(dto.n, terms)?)
}

pub fn p0_to(v: &P0Vector) -> Value {
    encode(&P0Dto {
        n: v.arity(),
        terms: v
            .terms()
            .map(|(a, c)| ScalarTerm {
                alpha: a.exponents().to_vec(),
                c: Rat(c.clone()),
            })
            .collect(),
    })
}

pub fn polynomial_from(v: &Value) -> Result<witt_smooth_core::Polynomial, CliError> {
    let dto: P0Dto = decode(v, "polynomial")?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        check_len(dto.n, &t.alpha, "alpha")?;
        terms.push((index(&t.alpha), t.c.0));
    }
    Ok(witt_smooth_core::Polynomial::from_terms(dto.n, terms)?)
}

pub fn polynomial_to(f: &witt_smooth_core::Polynomial) -> Value {
    encode(&P0Dto {
        n: f.arity(),
        terms: f
            .terms()
            .map(|(a, c)| ScalarTerm {
                alpha: a.exponents().to_vec(),
                c: Rat(c.clone()),
            })
            .collect(),
    })
}

pub type RawGln = (usize, Vec<Matrix>, Option<Vec<String>>);

/// Raw `(n, matrices, labels)` without validating the relations.
pub fn gln_raw_from(v: &Value) -> Result<RawGln, CliError> {
    let dto: GlnDto = decode(v, "gl_n module")?;
    let mats: Vec<Matrix> = dto.e.into_iter().map(|m| m.into_iter().map(unrat).collect()).collect();
    if mats.len() != dto.n * dto.n {
        return Err(CliError::Usage(format!("expected {} matrices in E", dto.n * dto.n)));
    }
    for m in &mats {
        if m.len() != dto.dim || m.iter().any(|r| r.len() != dto.dim) {
            return Err(CliError::Usage(format!("matrices in E must be {0}x{0}", dto.dim)));
        }
    }
    Ok((dto.n, mats, dto.labels))
}

pub fn gln_from(v: &Value) -> Result<GlnModule, CliError> {
    let (n, mats, labels) = gln_raw_from(v)?;
    let m = GlnModule::new(n, mats)?;
    Ok(match labels {
        Some(l) => m.with_labels(l)?,
        None => m,
    })
}

pub fn gln_to(m: &GlnModule) -> Value {
    encode(&GlnDto {
        n: m.arity(),
        dim: m.dim(),
        e: m.matrices().iter().map(|x| x.iter().map(|r| rats(r)).collect()).collect(),
        labels: m.labels().map(<[String]>::to_vec),
    })
}

pub fn family_from(s: &str) -> Result<Family, CliError> {
    match s {
        "tensor" => Ok(Family::Tensor),
        "induced" => Ok(Family::Induced),
        "trivial" => Ok(Family::Trivial),
        _ => Err(CliError::Usage(format!("unknown vector family {s:?}"))),
    }
}

/// Reads a vector; `family` and `dim` fall back to `context`.
pub fn vector_from(v: &Value, context: Option<(Family, usize)>) -> Result<ModuleVector, CliError> {
    let dto: VectorDto = decode(v, "module vector")?;
    let family = match (&dto.family, context) {
        (Some(f), _) => family_from(f)?,
        (None, Some((f, _))) => f,
        (None, None) => return Err(CliError::Usage("module vector needs a family".into())),
    };
    let dim = match (dto.dim, context, dto.terms.first()) {
        (Some(d), _, _) => d,
        (None, Some((_, d)), _) => d,
        (None, None, Some(t)) => t.c.len(),
        (None, None, None) => return Err(CliError::Usage("module vector needs a dim".into())),
    };
    let n = dto
        .n
        .or_else(|| dto.terms.first().map(|t| t.alpha.len()))
        .ok_or_else(|| CliError::Usage("module vector needs \"n\"".into()))?;
    let mut terms = Vec::with_capacity(dto.terms.len());
    for t in dto.terms {
        check_len(n, &t.alpha, "alpha")?;
        terms.push((index(&t.alpha), unrat(t.c)));
    }
    Ok(ModuleVector::from_terms(n, family, dim, terms)?)
}

pub fn vector_to(v: &ModuleVector) -> Value {
    encode(&VectorDto {
        n: Some(v.arity()),
        family: Some(v.family().name().to_string()),
        dim: Some(v.fiber_dim()),
        terms: v
            .terms()
            .map(|(a, c)| VectorTerm {
                alpha: a.exponents().to_vec(),
                c: rats(c),
            })
            .collect(),
    })
}
