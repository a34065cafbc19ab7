//! Minimal CSV writing: comma-separated, `\n` line endings, header first.

/// 17 significant digits, `nan` for NaN.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_precision_roundtrip() {
        for x in [
            0.1,
            std::f64::consts::PI,
            1e-300,
            -2.5e17,
            0.776_444_226_571_090_4,
        ] {
            let s = float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(float(f64::NAN), "nan");
    }

    #[test]
    fn table_layout() {
        let t = write_table(&["a", "b"], vec![vec!["1".into(), "2".into()]]);
        assert_eq!(t, "a,b\n1,2\n");
    }
}
