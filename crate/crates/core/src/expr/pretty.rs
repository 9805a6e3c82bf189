use super::ast::{EntireFunction, ExprNode};
use crate::Complex;

/// Canonical text form: parsing it reproduces the identical AST.
///
/// Non-atomic children of binary operators are fully parenthesized, so the
/// output is unambiguous regardless of precedence. Constants print through
/// Rust's shortest round-trip float formatting (never scientific notation),
/// which the number grammar accepts back bit-exactly.
pub fn pretty(f: &EntireFunction) -> String {
    pretty_node(f.ast())
}

pub(crate) fn pretty_node(node: &ExprNode) -> String {
    match node {
        ExprNode::Variable => "z".to_owned(),
        ExprNode::Constant(c) => fmt_const(c),
        ExprNode::Add(l, r) => format!("{}+{}", child(l), child(r)),
        ExprNode::Sub(l, r) => format!("{}-{}", child(l), child(r)),
        ExprNode::Mul(l, r) => format!("{}*{}", child(l), child(r)),
        ExprNode::DivByConst(n, c) => format!("{}/{}", child(n), const_operand(c)),
        ExprNode::Pow(b, k) => format!("{}^{}", pow_base(b), k),
        ExprNode::Exp(n) => format!("exp({})", pretty_node(n)),
        ExprNode::Sin(n) => format!("sin({})", pretty_node(n)),
        ExprNode::Cos(n) => format!("cos({})", pretty_node(n)),
        ExprNode::Sinh(n) => format!("sinh({})", pretty_node(n)),
        ExprNode::Cosh(n) => format!("cosh({})", pretty_node(n)),
    }
}

/// Operand position: wrap anything that is not self-delimiting.
fn child(node: &ExprNode) -> String {
    match node {
        ExprNode::Variable
        | ExprNode::Exp(_)
        | ExprNode::Sin(_)
        | ExprNode::Cos(_)
        | ExprNode::Sinh(_)
        | ExprNode::Cosh(_) => pretty_node(node),
        ExprNode::Pow(_, _) => pretty_node(node),
        ExprNode::Constant(c) => const_operand(c),
        _ => format!("({})", pretty_node(node)),
    }
}

/// Base of `^` must be a single grammar `base`, so even `Pow` wraps.
fn pow_base(node: &ExprNode) -> String {
    match node {
        ExprNode::Variable
        | ExprNode::Exp(_)
        | ExprNode::Sin(_)
        | ExprNode::Cos(_)
        | ExprNode::Sinh(_)
        | ExprNode::Cosh(_) => pretty_node(node),
        ExprNode::Constant(c) if !needs_parens(c) => fmt_const(c),
        _ => format!("({})", pretty_node(node)),
    }
}

fn const_operand(c: &Complex) -> String {
    if needs_parens(c) {
        format!("({})", fmt_const(c))
    } else {
        fmt_const(c)
    }
}

/// Signed or mixed constants are not bare number tokens.
fn needs_parens(c: &Complex) -> bool {
    if c.re != 0.0 && c.im != 0.0 {
        return true;
    }
    if c.im == 0.0 {
        c.re < 0.0
    } else {
        c.im < 0.0
    }
}

/// Pure real and pure imaginary constants round-trip through the parser.
/// Mixed constants (only constructible through the API or divisor folding)
/// print as a sum; in divisor position that re-folds to the same value.
fn fmt_const(c: &Complex) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else if c.im < 0.0 {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::super::parser::parse_function;
    use super::*;

    fn roundtrip(text: &str) {
        let f = parse_function(text).unwrap();
        let printed = pretty(&f);
        let again = parse_function(&printed).unwrap();
        assert_eq!(f.ast(), again.ast(), "{} -> {} changed shape", text, printed);
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(pretty(&parse_function("exp(z)").unwrap()), "exp(z)");
        assert_eq!(pretty(&parse_function("0.25*exp(z)").unwrap()), "0.25*exp(z)");
        assert_eq!(pretty(&parse_function("z^3").unwrap()), "z^3");
    }

    #[test]
    fn roundtrips() {
        for text in [
            "exp(z)",
            "0.25*exp(z)",
            "z^3",
            "exp(-z)",
            "-z",
            "-1.5",
            "1-2-3",
            "sin(z)+cos(z)*sinh(z)",
            "(z+1)^2",
            "(z^2)^3",
            "z/2",
            "z/(1+1i)",
            "cosh(z*z-0.5i)",
            "2*z^2+exp(sin(z))",
        ] {
            roundtrip(text);
        }
    }

    #[test]
    fn negative_constants_reparse() {
        // pretty of Sub(.., Constant(-1)) must not produce "--"
        let f = parse_function("z-(-1)").unwrap();
        let printed = pretty(&f);
        let again = parse_function(&printed).unwrap();
        assert_eq!(f.ast(), again.ast());
    }
}
