//! CPLEX LP text export.

use std::fmt::Write;

use super::{LinearConstraint, MilpModel, Sense};

/// Longest identifier written to an LP file.
pub const MAX_NAME_LEN: usize = 255;
const LINE_WRAP: usize = 200;

/// LP-safe identifier for entity `index`.
///
/// Characters outside `[A-Za-z0-9_.]` become `_`, a leading digit or dot
/// gets an `n` prefix, and names longer than [`MAX_NAME_LEN`] are cut and
/// suffixed with `~<index>` so distinct entities stay distinct.
pub fn lp_name(name: &str, index: usize) -> String {
    let mut s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit() || c == '.') {
        s.insert(0, 'n');
    }
    if s.len() > MAX_NAME_LEN {
        let suffix = format!("~{index}");
        s.truncate(MAX_NAME_LEN - suffix.len());
        s.push_str(&suffix);
    }
    s
}

fn number(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v}")
    }
}

fn push_terms(out: &mut String, head: &str, terms: &[(usize, f64)], names: &[String]) {
    let mut line = String::from(head);
    let mut first = true;
    let terms: Vec<(usize, f64)> = if terms.is_empty() && !names.is_empty() {
        vec![(0, 0.0)]
    } else {
        terms.to_vec()
    };
    for (k, a) in terms {
        let sign = if a < 0.0 { " -" } else if first { "" } else { " +" };
        let mag = a.abs();
        let term = if mag == 1.0 {
            format!("{sign} {}", names[k])
        } else {
            format!("{sign} {} {}", number(mag), names[k])
        };
        if line.len() + term.len() > LINE_WRAP {
            out.push_str(&line);
            out.push('\n');
            line = String::from("   ");
        }
        line.push_str(&term);
        first = false;
    }
    out.push_str(&line);
}

/// Writes `model` with `extra` rows appended, in CPLEX LP format.
pub fn export_lp_file(model: &MilpModel) -> String {
    export_with_rows(model, &[])
}

pub(crate) fn export_with_rows(model: &MilpModel, extra: &[LinearConstraint]) -> String {
    let names: Vec<String> =
        model.variables().iter().enumerate().map(|(i, v)| lp_name(&v.name, i)).collect();
    let mut out = String::new();
    if !model.name.is_empty() {
        let _ = writeln!(out, "\\ {}", model.name.replace('\n', " "));
    }
    out.push_str("Minimize\n");
    let obj: Vec<(usize, f64)> = model
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.obj != 0.0)
        .map(|(i, v)| (i, v.obj))
        .collect();
    push_terms(&mut out, " obj:", &obj, &names);
    out.push('\n');
    out.push_str("Subject To\n");
    let mut used = std::collections::HashSet::new();
    for (i, c) in model.constraints().iter().chain(extra).enumerate() {
        let mut row = lp_name(&c.name, i);
        let mut dup = 0;
        while !used.insert(row.clone()) {
            dup += 1;
            row = lp_name(&format!("{}_{i}_{dup}", c.name), i);
        }
        let head = format!(" {row}:");
        let terms: Vec<(usize, f64)> = c.coeffs.iter().copied().filter(|e| e.1 != 0.0).collect();
        push_terms(&mut out, &head, &terms, &names);
        let sense = match c.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        let _ = writeln!(out, " {sense} {}", number(c.rhs));
    }
    out.push_str("Bounds\n");
    for (i, v) in model.variables().iter().enumerate() {
        if v.binary && v.lb == 0.0 && v.ub == 1.0 {
            continue;
        }
        if v.lb == f64::NEG_INFINITY && v.ub == f64::INFINITY {
            let _ = writeln!(out, " {} free", names[i]);
        } else {
            let _ = writeln!(out, " {} <= {} <= {}", number(v.lb), names[i], number(v.ub));
        }
    }
    let bins: Vec<&str> = model
        .variables()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.binary)
        .map(|(i, _)| names[i].as_str())
        .collect();
    if !bins.is_empty() {
        out.push_str("Binaries\n");
        for chunk in bins.chunks(10) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_variable() {
        let mut m = MilpModel::new("one");
        let x = m.add_binary("x", 2.5);
        m.add_row("c", &[(x, 1.0)], Sense::Ge, 1.0).unwrap();
        let text = export_lp_file(&m);
        assert_eq!(text.matches("Minimize").count(), 1);
        assert_eq!(text.matches("Binaries").count(), 1);
        assert!(text.contains(" obj: 2.5 x\n"));
        assert!(text.contains(" c: x >= 1\n"));
        assert!(text.ends_with("End\n"));
    }

    #[test]
    fn zero_coefficient_omitted() {
        let mut m = MilpModel::new("z");
        let x = m.add_var("x", 0.0, 4.0, 1.0);
        let y = m.add_var("y", f64::NEG_INFINITY, f64::INFINITY, 0.0);
        m.add_row("c", &[(x, 3.0), (y, 1.0)], Sense::Le, 7.0).unwrap();
        m.constraints_mut()[0].coeffs.push((y, 0.0));
        let text = export_lp_file(&m);
        assert!(text.contains(" c: 3 x + y <= 7\n"), "{text}");
        assert!(text.contains(" y free\n"));
        assert!(text.contains(" 0 <= x <= 4\n"));
    }

    #[test]
    fn long_names_truncated_with_index() {
        let long = "a".repeat(300);
        let a = lp_name(&long, 7);
        let b = lp_name(&long, 8);
        assert_eq!(a.len(), MAX_NAME_LEN);
        assert!(a.ends_with("~7"));
        assert_ne!(a, b);
        assert_eq!(lp_name("3x", 0), "n3x");
        assert_eq!(lp_name("a b", 0), "a_b");
    }

    #[test]
    fn coefficients_round_trip() {
        let mut m = MilpModel::new("r");
        let x = m.add_var("x", 0.0, 1.0, 0.1 + 0.2);
        m.add_row("c", &[(x, 1.0 / 3.0)], Sense::Eq, 2.0 / 7.0).unwrap();
        let text = export_lp_file(&m);
        let obj_line = text.lines().find(|l| l.starts_with(" obj:")).unwrap();
        let coef: f64 = obj_line.split_whitespace().nth(1).unwrap().parse().unwrap();
        assert_eq!(coef, 0.1 + 0.2);
        let row = text.lines().find(|l| l.starts_with(" c:")).unwrap();
        let parts: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(parts[1].parse::<f64>().unwrap(), 1.0 / 3.0);
        assert_eq!(parts[4].parse::<f64>().unwrap(), 2.0 / 7.0);
    }

    #[test]
    fn repeated_row_names_made_unique() {
        let mut m = MilpModel::new("d");
        let x = m.add_binary("x", 1.0);
        m.add_row("c", &[(x, 1.0)], Sense::Ge, 0.0).unwrap();
        m.add_row("c", &[(x, 1.0)], Sense::Le, 1.0).unwrap();
        m.add_row("c_1_1", &[(x, 1.0)], Sense::Le, 1.0).unwrap();
        let extra = [m.constraints()[0].clone()];
        let text = export_with_rows(&m, &extra);
        let heads: Vec<&str> = text
            .lines()
            .filter(|l| l.starts_with(' ') && l.contains(':') && !l.starts_with(" obj:"))
            .map(|l| l.split(':').next().unwrap())
            .collect();
        assert_eq!(heads.len(), 4);
        let distinct: std::collections::HashSet<_> = heads.iter().collect();
        assert_eq!(distinct.len(), 4, "{heads:?}");
    }
}
