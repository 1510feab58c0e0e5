//! Plain-text dump of a conic program, for debugging.

use std::fmt::Write;

use super::{Cone, ConicProgram, LinearMap, Objective, Rel, Sense};
use crate::qcore::CMat;

fn write_map(out: &mut String, m: &LinearMap) {
    let _ = writeln!(out, "    map {} -> {} nnz {}", m.in_dim, m.out_dim, m.entries.len());
    for e in &m.entries {
        let _ = writeln!(out, "      {} {} {} {} {:.17e} {:.17e}", e.r, e.c, e.p, e.q, e.coef.re, e.coef.im);
    }
}

fn write_mat(out: &mut String, m: &CMat) {
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let v = m[(r, c)];
            if v.norm() != 0.0 {
                let _ = writeln!(out, "      {} {} {:.17e} {:.17e}", r, c, v.re, v.im);
            }
        }
    }
}

pub(crate) fn to_text(p: &ConicProgram) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "conic-program v1");
    for (k, v) in p.vars.iter().enumerate() {
        let cone = match v.cone {
            Cone::Psd => "psd",
            Cone::Free => "free",
        };
        let _ = writeln!(out, "var {k} {} {} {cone}", v.name, v.dim);
    }
    for c in &p.constraints {
        let rel = match c.rel {
            Rel::Eq => "==",
            Rel::Geq => ">=",
            Rel::Leq => "<=",
        };
        let _ = writeln!(out, "con {} {rel} dim {}", c.name, c.rhs.nrows());
        for (v, m) in &c.terms {
            let _ = writeln!(out, "  term var {}", v.0);
            write_map(&mut out, m);
        }
        let _ = writeln!(out, "  rhs");
        write_mat(&mut out, &c.rhs);
    }
    match &p.objective {
        Objective::Linear { sense, terms } => {
            let s = if *sense == Sense::Minimize { "min" } else { "max" };
            let _ = writeln!(out, "objective linear {s}");
            for (v, w) in terms {
                let _ = writeln!(out, "  weight var {}", v.0);
                write_mat(&mut out, w);
            }
        }
        Objective::SpectralNorm { terms, psd_argument } => {
            let _ = writeln!(out, "objective spectral-norm min psd-argument {psd_argument}");
            for (v, m) in terms {
                let _ = writeln!(out, "  term var {}", v.0);
                write_map(&mut out, m);
            }
        }
    }
    out
}
