//! JSON encodings; exact rationals become `"num/den"` strings.

use num_rational::BigRational;
use serde_json::{json, Value};

use ffgaps::ffcore::{FieldCtx, Poly};
use ffgaps::geometry::{GenusEstimate, GenusSource};

pub fn rat(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn poly(ctx: &FieldCtx, p: &Poly) -> Value {
    Value::String(ctx.fmt_poly(p))
}

pub fn polys(ctx: &FieldCtx, ps: &[Poly]) -> Value {
    Value::Array(ps.iter().map(|p| poly(ctx, p)).collect())
}

pub fn genus(g: &GenusEstimate) -> Value {
    let source = match g.source {
        GenusSource::Kummer => "kummer",
        GenusSource::Cyclotomic => "cyclotomic",
        GenusSource::Castelnuovo => "castelnuovo",
    };
    json!({ "genus": g.genus, "exact": g.exact, "source": source })
}

/// Renders a flat JSON object as `key<TAB>value` lines.
pub fn tsv_object(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}\t{s}\n"));
        }
    }
    out
}
