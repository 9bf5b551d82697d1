//! Pretty-printer producing text that parses back to the same tree.
//!
//! Binary connectives get parentheses only where precedence or
//! associativity demands it. Quantifier bodies extend to the right, so a
//! quantifier gets parentheses whenever anything follows it. Negation always
//! parenthesizes its operand unless the operand is a constant or another
//! negation.

use super::{Formula, Term, DIVIDES, LESS, MOD};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub(crate) fn term_to_string(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

pub(crate) fn formula_to_string(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, 0, true, &mut out);
    out
}

fn is_infix_mod(t: &Term) -> bool {
    matches!(t, Term::App(f, args) if f == MOD && args.len() == 2)
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Lit(n) => out.push_str(&n.to_string()),
        Term::App(f, args) if f == MOD && args.len() == 2 => {
            // nested mods are always parenthesized, on either side
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(" mod ");
                }
                if is_infix_mod(a) {
                    out.push('(');
                    write_term(a, out);
                    out.push(')');
                } else {
                    write_term(a, out);
                }
            }
        }
        Term::App(f, args) => write_application(f, args, out),
    }
}

fn write_application(f: &str, args: &[Term], out: &mut String) {
    out.push_str(f);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(a, out);
    }
    out.push(')');
}

fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

/// `rightmost` is true when nothing follows `f` before the enclosing
/// closing parenthesis or the end of input.
fn write_formula(f: &Formula, min_prec: u8, rightmost: bool, out: &mut String) {
    let open_ended = matches!(f, Formula::Forall(..) | Formula::Exists(..));
    if precedence(f) < min_prec || (open_ended && !rightmost) {
        out.push('(');
        write_formula(f, 0, true, out);
        out.push(')');
        return;
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(r, args) if (r == LESS || r == DIVIDES) && args.len() == 2 => {
            write_term(&args[0], out);
            out.push_str(if r == LESS { " < " } else { " divides " });
            write_term(&args[1], out);
        }
        Formula::Atom(r, args) => write_application(r, args, out),
        Formula::Eq(a, b) => {
            write_term(a, out);
            out.push_str(" = ");
            write_term(b, out);
        }
        Formula::Not(g) => {
            out.push_str("not ");
            match **g {
                Formula::Not(_) | Formula::True | Formula::False => {
                    write_formula(g, UNARY, rightmost, out)
                }
                _ => {
                    out.push('(');
                    write_formula(g, 0, true, out);
                    out.push(')');
                }
            }
        }
        Formula::And(a, b) => binary(a, " & ", b, (AND, UNARY), rightmost, out),
        Formula::Or(a, b) => binary(a, " or ", b, (OR, AND), rightmost, out),
        Formula::Implies(a, b) => binary(a, " -> ", b, (OR, IMPLIES), rightmost, out),
        Formula::Iff(a, b) => binary(a, " <-> ", b, (IFF, IMPLIES), rightmost, out),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            out.push_str(if matches!(f, Formula::Forall(..)) {
                "forall "
            } else {
                "exists "
            });
            out.push_str(v);
            out.push_str(". ");
            write_formula(body, 0, true, out);
        }
    }
}

fn binary(
    a: &Formula,
    op: &str,
    b: &Formula,
    (left_min, right_min): (u8, u8),
    rightmost: bool,
    out: &mut String,
) {
    write_formula(a, left_min, false, out);
    out.push_str(op);
    write_formula(b, right_min, rightmost, out);
}
