use super::SweepRecord;

/// Decimal rendering with 12 significant digits, trailing zeros trimmed.
/// Very large or small magnitudes fall back to scientific notation.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..15).contains(&exp) {
        let digits = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.digits$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_sig12).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

/// Header comes from the first record; all records of one sweep share
/// the same parameter keys and checks.
pub(super) fn records_csv(records: &[SweepRecord]) -> String {
    let Some(first) = records.first() else {
        return String::new();
    };
    let mut header = vec!["trial".to_string()];
    header.extend(first.params.keys().cloned());
    header.extend(["sigma_min", "sigma_max", "kappa"].map(String::from));
    for c in &first.checks {
        for field in ["applicable", "lower", "upper", "lower_holds", "upper_holds"] {
            header.push(format!("{}_{field}", c.label));
        }
    }
    header.push("violation".into());

    let mut out = header.join(",");
    out.push('\n');
    for r in records {
        let mut row = vec![r.trial.to_string()];
        row.extend(first.params.keys().map(|k| opt_num(r.params.get(k).copied())));
        row.extend([opt_num(r.sigma_min), opt_num(r.sigma_max), opt_num(r.kappa())]);
        for label in first.checks.iter().map(|c| &c.label) {
            match r.check(label) {
                Some(c) => row.extend([
                    c.applicable.to_string(),
                    opt_num(c.lower),
                    opt_num(c.upper),
                    opt_bool(c.lower_holds),
                    opt_bool(c.upper_holds),
                ]),
                None => row.extend(std::iter::repeat(String::new()).take(5)),
            }
        }
        row.push(r.violation.to_string());
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
