//! Integer expressions over named parameters, used by the catalog and golden data.

use std::collections::BTreeMap;

use evalexpr::{
    ContextWithMutableVariables, DefaultNumericTypes, HashMapContext, Value,
};

use crate::error::{Error, Result};

pub type Env = BTreeMap<String, i64>;

fn context(env: &Env) -> Result<HashMapContext<DefaultNumericTypes>> {
    let mut ctx = HashMapContext::<DefaultNumericTypes>::new();
    for (k, v) in env {
        ctx.set_value(k.clone(), Value::from_int(*v))
            .map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(ctx)
}

pub fn eval_int(expr: &str, env: &Env) -> Result<i64> {
    let ctx = context(env)?;
    evalexpr::eval_int_with_context(expr, &ctx)
        .map_err(|e| Error::Parse(format!("`{expr}`: {e}")))
}

pub fn eval_bool(expr: &str, env: &Env) -> Result<bool> {
    let ctx = context(env)?;
    evalexpr::eval_boolean_with_context(expr, &ctx)
        .map_err(|e| Error::Parse(format!("`{expr}`: {e}")))
}

/// Replaces every `{expr}` in `template` by its integer value.
pub fn render(template: &str, env: &Env) -> Result<String> {
    let mut out = String::new();
    let mut rest = template;
    while let Some(start) = rest.find('{') {
        out.push_str(&rest[..start]);
        let end = rest[start..]
            .find('}')
            .ok_or_else(|| Error::Parse(format!("unclosed brace in `{template}`")))?;
        let inner = &rest[start + 1..start + end];
        out.push_str(&eval_int(inner, env)?.to_string());
        rest = &rest[start + end + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
