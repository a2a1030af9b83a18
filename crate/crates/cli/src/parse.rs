//! Flag value parsing: reals with exact fractions, point lists, sizes.
//!
//! Lists use ',' between components and ';' between points. A value that
//! starts with '[' is read as JSON instead, where strings may hold
//! fractions.

use serde_json::Value;

/// A real written as a decimal or as an exact fraction `p/q`.
///
/// Fractions are divided once in f64, so `1/2` is exactly 0.5 and `1/3`
/// is the nearest double to one third.
pub fn parse_real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let x = match t.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in {t:?}"))?;
            let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in {t:?}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {t:?}"));
            }
            p as f64 / q as f64
        }
        None => match t {
            "inf" | "infinity" => f64::INFINITY,
            _ => t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"))?,
        },
    };
    if x.is_nan() {
        return Err(format!("not a number: {t:?}"));
    }
    Ok(x)
}

/// Finite real; rejects `inf`.
pub fn parse_finite(text: &str) -> Result<f64, String> {
    let x = parse_real(text)?;
    if !x.is_finite() {
        return Err(format!("value must be finite: {text:?}"));
    }
    Ok(x)
}

fn json_real(v: &Value) -> Result<f64, String> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| format!("bad number {n}")),
        Value::String(s) => parse_finite(s),
        other => Err(format!("expected a number, got {other}")),
    }
}

/// Points in `R^d`. Plain comma lists without ';' are one-dimensional.
pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>, String> {
    let t = text.trim();
    if t.is_empty() {
        return Err("empty list".into());
    }
    let points: Vec<Vec<f64>> = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(|e| format!("bad JSON list: {e}"))?;
        let Value::Array(items) = v else {
            return Err("expected a JSON array".into());
        };
        items
            .iter()
            .map(|item| match item {
                Value::Array(comps) => comps.iter().map(json_real).collect(),
                scalar => json_real(scalar).map(|x| vec![x]),
            })
            .collect::<Result<_, _>>()?
    } else if t.contains(';') {
        t.split(';')
            .map(|p| p.split(',').map(parse_finite).collect())
            .collect::<Result<_, _>>()?
    } else {
        t.split(',').map(|x| parse_finite(x).map(|x| vec![x])).collect::<Result<_, _>>()?
    };
    if points.is_empty() {
        return Err("empty list".into());
    }
    let d = points[0].len();
    if d == 0 || points.iter().any(|p| p.len() != d) {
        return Err("points must all have the same positive dimension".into());
    }
    Ok(points)
}

/// Flat list of reals.
pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    let points = parse_points(text)?;
    if points[0].len() != 1 {
        return Err("expected a flat list of numbers".into());
    }
    Ok(points.into_iter().map(|p| p[0]).collect())
}

/// Points with integer coordinates.
pub fn parse_int_points(text: &str) -> Result<Vec<Vec<i64>>, String> {
    parse_points(text)?
        .into_iter()
        .map(|p| {
            p.into_iter()
                .map(|x| {
                    if x.fract() == 0.0 && x.abs() < 9.0e15 {
                        Ok(x as i64)
                    } else {
                        Err(format!("expected an integer, got {x}"))
                    }
                })
                .collect()
        })
        .collect()
}

/// Positive sizes such as `16` or `8,8`.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, String> {
    let ints = parse_int_points(text)?;
    ints.into_iter()
        .flatten()
        .map(|k| {
            usize::try_from(k)
                .ok()
                .filter(|&k| k > 0)
                .ok_or_else(|| format!("sizes must be positive, got {k}"))
        })
        .collect()
}
