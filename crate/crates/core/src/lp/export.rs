use std::fmt::Write;

use super::{LinearProgram, VarTag};

/// Fixed-point decimal with 12 significant digits.
fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let digits = v.abs().log10().floor() as i32;
    let decimals = (11 - digits).max(0) as usize;
    let s = format!("{:.*}", decimals, v);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn name(tag: VarTag, j: usize) -> String {
    match tag {
        VarTag::Orbital { layer, arc } => format!("l_{}_{}", layer + 1, arc),
        VarTag::Entry { node } => format!("t_0_{node}"),
        VarTag::Exit { layer, node } => format!("t_{}_{}", layer + 1, node),
        VarTag::Network { arc } => format!("f_{arc}_{j}"),
    }
}

/// Writes the program in CPLEX LP text format.
pub fn write_lp(lp: &LinearProgram) -> String {
    let names: Vec<String> = lp.tags.iter().enumerate().map(|(j, &t)| name(t, j)).collect();
    let mut out = String::from("Minimize\n obj:");
    let mut any = false;
    for (j, &c) in lp.cost.iter().enumerate() {
        if c != 0.0 {
            let _ = write!(
                out,
                " {} {} {}",
                if c < 0.0 { "-" } else { "+" },
                num(c.abs()),
                names[j]
            );
            any = true;
        }
    }
    if !any {
        out.push_str(" 0");
    }
    out.push_str("\nSubject To\n");
    for (i, row) in lp.rows.iter().enumerate() {
        let _ = write!(out, " c{i}:");
        if row.coeffs.is_empty() {
            out.push_str(" 0");
        }
        for &(j, a) in &row.coeffs {
            let _ = write!(
                out,
                " {} {} {}",
                if a < 0.0 { "-" } else { "+" },
                num(a.abs()),
                names[j]
            );
        }
        let _ = writeln!(out, " = {}", num(row.rhs));
    }
    out.push_str("Bounds\n");
    for (j, n) in names.iter().enumerate() {
        match lp.upper[j] {
            Some(u) => {
                let _ = writeln!(out, " {} <= {} <= {}", num(lp.lower[j]), n, num(u));
            }
            None => {
                let _ = writeln!(out, " {} >= {}", n, num(lp.lower[j]));
            }
        }
    }
    out.push_str("End\n");
    out
}
