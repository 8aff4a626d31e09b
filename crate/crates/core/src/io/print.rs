//! Canonical, deterministic text rendering. Operators print with descending
//! powers of `D`, coefficients with Grassmann generators in canonical order
//! (`xi` first, then thetas ascending), fractions in normalized form. The
//! printer and the parser in this module are mutually inverse on values.

use crate::funcring::{ExpMono, GrassmannMono, Rat, ScalarFn, ScalarFrac, SuperConst, SuperFn};
use crate::kernel::KernelBasis;
use crate::superop::SuperOp;
use num::{One, Signed, Zero};
use std::fmt;

pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when the string contains one of the characters outside any
/// parentheses.
fn has_top_level(s: &str, chars: &[char]) -> bool {
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ if depth == 0 && chars.contains(&c) => return true,
            _ => {}
        }
    }
    false
}

fn paren_if(s: String, cond: bool) -> String {
    if cond {
        format!("({})", s)
    } else {
        s
    }
}

/// Joins term strings with ` + ` / ` - `, folding a leading minus of each
/// term into the separator.
fn join_terms(terms: Vec<String>) -> String {
    let mut out = String::new();
    for t in terms {
        if out.is_empty() {
            out = t;
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&t);
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

fn poly_str(p: &[Rat]) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = if k == 0 {
            rat_str(&mag)
        } else {
            let x = if k == 1 {
                "x".to_string()
            } else {
                format!("x^{}", k)
            };
            if mag.is_one() {
                x
            } else {
                format!("{}*{}", rat_str(&mag), x)
            }
        };
        terms.push(if c.is_negative() {
            format!("-{}", body)
        } else {
            body
        });
    }
    join_terms(terms)
}

fn exp_str(freq: &Rat) -> String {
    if freq.is_one() {
        "exp(x)".into()
    } else if (-freq).is_one() {
        "exp(-x)".into()
    } else {
        format!("exp({}*x)", rat_str(freq))
    }
}

fn expmono_str(t: &ExpMono) -> String {
    if t.freq.is_zero() {
        return poly_str(&t.poly);
    }
    let e = exp_str(&t.freq);
    let nonzero = t.poly.iter().filter(|c| !c.is_zero()).count();
    if nonzero == 1 {
        let p = poly_str(&t.poly);
        if p == "1" {
            e
        } else if p == "-1" {
            format!("-{}", e)
        } else {
            format!("{}*{}", p, e)
        }
    } else {
        format!("({})*{}", poly_str(&t.poly), e)
    }
}

fn scalarfn_str(f: &ScalarFn) -> String {
    join_terms(f.terms().iter().map(expmono_str).collect())
}

fn mono_str(m: GrassmannMono) -> String {
    if m.is_empty() {
        String::new()
    } else {
        m.to_string()
    }
}

/// Renders `|frac| * gens * D^k`; the caller handles the overall sign.
fn term_str(frac: &ScalarFrac, gens: &str, dpow: Option<usize>) -> String {
    let num = frac.num();
    let den = frac.den();
    let core = if den.is_one() {
        let ns = scalarfn_str(num);
        if ns == "1" && !gens.is_empty() {
            gens.to_string()
        } else if gens.is_empty() {
            ns
        } else {
            format!("{}*{}", paren_if(ns.clone(), has_top_level(&ns, &['+', '-'])), gens)
        }
    } else {
        let ds = scalarfn_str(den);
        let den_part = paren_if(ds.clone(), has_top_level(&ds, &['+', '-', '*']));
        let ns = scalarfn_str(num);
        if ns == "1" && !gens.is_empty() {
            format!("{}/{}", gens, den_part)
        } else {
            let num_part = paren_if(ns.clone(), has_top_level(&ns, &['+', '-']));
            if gens.is_empty() {
                format!("{}/{}", num_part, den_part)
            } else {
                format!("{}*{}/{}", num_part, gens, den_part)
            }
        }
    };
    match dpow {
        None => core,
        Some(k) => {
            let d = if k == 1 {
                "D".to_string()
            } else {
                format!("D^{}", k)
            };
            if core == "1" {
                d
            } else {
                let wrapped = paren_if(core.clone(), has_top_level(&core, &['+', '-', '/']));
                format!("{}*{}", wrapped, d)
            }
        }
    }
}

fn entry_term(m: GrassmannMono, frac: &ScalarFrac, dpow: Option<usize>) -> String {
    let (neg, mag) = if frac.is_negative() {
        (true, frac.neg())
    } else {
        (false, frac.clone())
    };
    let s = term_str(&mag, &mono_str(m), dpow);
    if neg {
        // a bare sum must be grouped before the sign distributes over it
        format!("-{}", paren_if(s.clone(), has_top_level(&s, &['+', '-'])))
    } else {
        s
    }
}

pub fn superfn_str(f: &SuperFn) -> String {
    join_terms(
        f.entries()
            .map(|(m, c)| entry_term(*m, c, None))
            .collect(),
    )
}

pub fn superop_str(op: &SuperOp) -> String {
    let Some(order) = op.deg() else {
        return "0".into();
    };
    let mut terms = Vec::new();
    for k in (0..=order).rev() {
        let a = op.coeff(k);
        if a.is_zero() {
            continue;
        }
        if k == 0 {
            for (m, c) in a.entries() {
                terms.push(entry_term(*m, c, None));
            }
            continue;
        }
        let entries: Vec<_> = a.entries().collect();
        if entries.len() == 1 {
            let (m, c) = entries[0];
            terms.push(entry_term(*m, c, Some(k)));
        } else {
            let d = if k == 1 {
                "D".to_string()
            } else {
                format!("D^{}", k)
            };
            terms.push(format!("({})*{}", superfn_str(&a), d));
        }
    }
    join_terms(terms)
}

pub fn superconst_str(c: &SuperConst) -> String {
    join_terms(
        c.entries()
            .map(|(m, v)| {
                let mag = v.abs();
                let gens = mono_str(*m);
                let body = if gens.is_empty() {
                    rat_str(&mag)
                } else if mag.is_one() {
                    gens
                } else {
                    format!("{}*{}", rat_str(&mag), gens)
                };
                if v.is_negative() {
                    format!("-{}", body)
                } else {
                    body
                }
            })
            .collect(),
    )
}

pub fn kernel_basis_str(kb: &KernelBasis) -> String {
    kb.elems()
        .iter()
        .map(superfn_str)
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for SuperFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", superfn_str(self))
    }
}

impl fmt::Display for SuperOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", superop_str(self))
    }
}

impl fmt::Display for SuperConst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", superconst_str(self))
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", scalarfn_str(self))
    }
}

impl fmt::Display for ScalarFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", term_str(self, "", None))
    }
}
