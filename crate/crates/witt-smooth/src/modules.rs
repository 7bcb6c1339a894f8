//! Module descriptors `{"family", "n", "data"}` and a dispatching module type.

use num_traits::Zero;
use serde_json::{json, Value};

use witt_smooth_core::gln::{exterior_power, one_dim_module, tau_twist, GlnModule};
use witt_smooth_core::module::{BasisTerms, Family, FiniteModule, ModuleVector, SmoothModule};
use witt_smooth_core::witt::Symbol;
use witt_smooth_core::{Character, InducedModule, MultiIndex, Scalar, TensorModule, TrivialModule, WhittakerModule};

use crate::json;
use crate::CliError;

/// Default PBW truncation of `M(φ)`.
pub const DEFAULT_WHITTAKER_CAP: u32 = 3;

#[allow(clippy::large_enum_variant)]
pub enum AnyModule {
    Tensor(TensorModule),
    Induced(InducedModule<FiniteModule>),
    Whittaker(InducedModule<WhittakerModule>),
    Trivial(TrivialModule),
}

macro_rules! dispatch {
    ($self:expr, $m:ident => $e:expr) => {
        match $self {
            AnyModule::Tensor($m) => $e,
            AnyModule::Induced($m) => $e,
            AnyModule::Whittaker($m) => $e,
            AnyModule::Trivial($m) => $e,
        }
    };
}

impl SmoothModule for AnyModule {
    fn arity(&self) -> usize {
        dispatch!(self, m => m.arity())
    }

    fn fiber_dim(&self) -> usize {
        dispatch!(self, m => m.fiber_dim())
    }

    fn family(&self) -> Family {
        dispatch!(self, m => m.family())
    }

    fn level(&self) -> u32 {
        dispatch!(self, m => m.level())
    }

    fn fiber_degree(&self, k: usize) -> u32 {
        dispatch!(self, m => m.fiber_degree(k))
    }

    fn fiber_cap(&self) -> Option<u32> {
        dispatch!(self, m => m.fiber_cap())
    }

    fn max_degree(&self) -> Option<u32> {
        dispatch!(self, m => m.max_degree())
    }

    fn act_basis(&self, sym: &Symbol, alpha: &MultiIndex, k: usize) -> witt_smooth_core::Result<BasisTerms> {
        dispatch!(self, m => m.act_basis(sym, alpha, k))
    }
}

impl AnyModule {
    pub fn context(&self) -> (Family, usize) {
        (self.family(), self.fiber_dim())
    }

    pub fn summary(&self) -> Value {
        let kind = match self {
            AnyModule::Tensor(_) => "tensor",
            AnyModule::Induced(_) => "induced",
            AnyModule::Whittaker(_) => "whittaker",
            AnyModule::Trivial(_) => "trivial",
        };
        json!({
            "family": kind,
            "n": self.arity(),
            "fiber_dim": self.fiber_dim(),
            "level": self.level(),
            "fiber_cap": self.fiber_cap(),
        })
    }

    pub fn vector(&self, v: &Value) -> Result<ModuleVector, CliError> {
        json::vector_from(v, Some(self.context()))
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Usage(format!("missing field {key:?}")))
}

fn uint(v: &Value, key: &str) -> Result<u64, CliError> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| CliError::Usage(format!("field {key:?} must be a non-negative integer")))
}

/// A `gl_n`-module from `{"gln": ...}`, `{"exterior": k}` or `{"one_dim": b}`,
/// optionally twisted by `{"twist": true}`.
pub fn gln_from_data(n: usize, data: &Value) -> Result<GlnModule, CliError> {
    let m = if let Some(g) = data.get("gln") {
        let m = json::gln_from(g)?;
        if m.arity() != n {
            return Err(witt_smooth_core::Error::Arity { left: n, right: m.arity() }.into());
        }
        m
    } else if let Some(k) = data.get("exterior") {
        let k = k
            .as_u64()
            .ok_or_else(|| CliError::Usage("\"exterior\" must be a non-negative integer".into()))?;
        exterior_power(n, k as usize)?
    } else if let Some(b) = data.get("one_dim") {
        one_dim_module(n, json::scalar_from(b)?)?
    } else {
        return Err(CliError::Usage("data needs one of \"gln\", \"exterior\", \"one_dim\"".into()));
    };
    Ok(if data.get("twist").and_then(Value::as_bool) == Some(true) {
        tau_twist(&m)
    } else {
        m
    })
}

fn finite_from_data(n: usize, data: &Value) -> Result<FiniteModule, CliError> {
    if let Some(actions) = data.get("actions") {
        let dim = uint(data, "dim")? as usize;
        let level = uint(data, "level")? as u32;
        let list = actions
            .as_array()
            .ok_or_else(|| CliError::Usage("\"actions\" must be a list".into()))?;
        let mut entries = Vec::with_capacity(list.len());
        for a in list {
            let alpha = json::multi_index_from(field(a, "alpha")?)?;
            if alpha.arity() != n {
                return Err(witt_smooth_core::Error::Arity { left: n, right: alpha.arity() }.into());
            }
            let i = uint(a, "i")? as usize;
            if i == 0 || i > n {
                return Err(CliError::Usage(format!("direction {i} not in 1..={n}")));
            }
            entries.push(((alpha, i - 1), json::matrix_from(field(a, "matrix")?)?));
        }
        return Ok(FiniteModule::new(n, dim, level, entries)?);
    }
    if let Some(l) = data.get("lambda") {
        return Ok(FiniteModule::character(n, json::scalar_from(l)?)?);
    }
    Ok(FiniteModule::from_gln(&gln_from_data(n, data)?))
}

pub fn character_from(v: &Value) -> Result<Character, CliError> {
    let p = json::scalars_from(field(v, "p")?)?;
    let q = match v.get("q") {
        Some(q) => json::scalars_from(q)?,
        None => vec![Scalar::zero(), Scalar::zero()],
    };
    let p: [_; 4] = p
        .try_into()
        .map_err(|_| CliError::Usage("\"p\" must list four values".into()))?;
    let q: [_; 2] = q
        .try_into()
        .map_err(|_| CliError::Usage("\"q\" must list two values".into()))?;
    Ok(Character::new(p, q))
}

pub fn character_to(phi: &Character) -> Value {
    json!({"p": json::scalars_to(phi.p()), "q": json::scalars_to(phi.q())})
}

pub fn module_from(v: &Value) -> Result<AnyModule, CliError> {
    let family = field(v, "family")?
        .as_str()
        .ok_or_else(|| CliError::Usage("\"family\" must be a string".into()))?;
    let n = uint(v, "n")? as usize;
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let empty = json!({});
    let data = v.get("data").unwrap_or(&empty);
    match family {
        "tensor" => Ok(AnyModule::Tensor(TensorModule::new(gln_from_data(n, data)?))),
        "induced" => Ok(AnyModule::Induced(InducedModule::new(finite_from_data(n, data)?))),
        "wphi" => {
            let lambda = json::scalar_from(field(data, "lambda")?)?;
            Ok(AnyModule::Induced(witt_smooth_core::make_w_phi(n, lambda)?))
        }
        "whittaker" => {
            if n != 2 {
                return Err(witt_smooth_core::Error::Arity { left: 2, right: n }.into());
            }
            let cap = match data.get("cap") {
                Some(_) => uint(data, "cap")? as u32,
                None => DEFAULT_WHITTAKER_CAP,
            };
            let phi = character_from(data)?;
            Ok(AnyModule::Whittaker(InducedModule::new(WhittakerModule::new(phi, cap))))
        }
        "trivial" => Ok(AnyModule::Trivial(TrivialModule::new(n))),
        _ => Err(CliError::Usage(format!("unknown module family {family:?}"))),
    }
}
