//! Model dump in the CPLEX LP text dialect, for debugging with external
//! tools.

use super::{LinearProgram, MixedIntegerProgram, ObjectiveSense, Relation};
use std::fmt::Write;

fn write_terms(out: &mut String, coeffs: &[f64]) {
    let mut first = true;
    for (j, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        if first {
            let _ = write!(out, "{c} x{j}");
            first = false;
        } else if c < 0.0 {
            let _ = write!(out, " - {} x{j}", -c);
        } else {
            let _ = write!(out, " + {c} x{j}");
        }
    }
    if first {
        out.push('0');
    }
}

/// Renders a linear program in CPLEX LP format.
pub fn lp_to_lp_format(lp: &LinearProgram) -> String {
    let mut out = String::new();
    out.push_str(match lp.sense {
        ObjectiveSense::Minimize => "Minimize\n obj: ",
        ObjectiveSense::Maximize => "Maximize\n obj: ",
    });
    write_terms(&mut out, &lp.objective);
    out.push_str("\nSubject To\n");
    for (i, c) in lp.constraints.iter().enumerate() {
        let _ = write!(out, " c{i}: ");
        write_terms(&mut out, &c.coeffs);
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        };
        let _ = writeln!(out, " {rel} {}", c.rhs);
    }
    out.push_str("Bounds\n");
    for (j, &(lo, hi)) in lp.bounds.iter().enumerate() {
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => {
                let _ = writeln!(out, " {lo} <= x{j} <= {hi}");
            }
            (true, false) => {
                let _ = writeln!(out, " x{j} >= {lo}");
            }
            (false, true) => {
                let _ = writeln!(out, " x{j} <= {hi}");
            }
            (false, false) => {
                let _ = writeln!(out, " x{j} free");
            }
        }
    }
    out.push_str("End\n");
    out
}

/// Renders a mixed-integer program in CPLEX LP format, with a `Binary`
/// section for the integer variables.
pub fn milp_to_lp_format(mip: &MixedIntegerProgram) -> String {
    let mut out = lp_to_lp_format(&mip.base);
    out.truncate(out.len() - "End\n".len());
    out.push_str("Binary\n");
    for &j in &mip.binary_indices {
        let _ = writeln!(out, " x{j}");
    }
    out.push_str("End\n");
    out
}
