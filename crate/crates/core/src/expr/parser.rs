use super::ast::{EntireFunction, ExprNode};
use crate::Complex;

/// What went wrong while parsing.
#[derive(Clone, Debug, PartialEq)]
pub enum ParseErrorKind {
    /// Malformed input; the message names the expectation.
    Syntax(String),
    /// Division by a z-dependent subexpression; the result would not be
    /// entire.
    NotEntire,
    /// A call to a function outside `exp`, `sin`, `cos`, `sinh`, `cosh`,
    /// or a stray identifier.
    UnknownFunction(String),
}

/// Parse failure with the byte offset at which it was detected.
#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at {}: {}", self.position, msg)
            }
            ParseErrorKind::NotEntire => write!(
                f,
                "error at {}: division by a z-dependent expression is not entire",
                self.position
            ),
            ParseErrorKind::UnknownFunction(name) => {
                write!(f, "unknown function '{}' at {}", name, self.position)
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// Parse an expression in the grammar
///
/// ```text
/// expr   := ['-'] term (('+' | '-') term)*
/// term   := factor (('*' | '/') factor)*
/// factor := base ('^' uint)?
/// base   := 'z' | number | '(' expr ')' | func '(' expr ')'
/// func   := 'exp' | 'sin' | 'cos' | 'sinh' | 'cosh'
/// number := digits ['.' digits] ['i']
/// ```
///
/// Division is accepted only when the divisor subexpression is
/// z-independent; it is folded into a constant. A leading `-` on an
/// expression negates its first term (folded into the constant when the
/// term is a literal, otherwise kept as `0 - term`).
pub fn parse_function(text: &str) -> Result<EntireFunction, ParseError> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.syntax("empty expression"));
    }
    let ast = p.parse_expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(EntireFunction::with_source(ast, text.to_owned()))
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.input.len()
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn syntax(&self, msg: &str) -> ParseError {
        ParseError {
            position: self.pos,
            kind: ParseErrorKind::Syntax(msg.to_owned()),
        }
    }

    fn parse_expr(&mut self) -> Result<ExprNode, ParseError> {
        self.skip_ws();
        let mut node = if self.peek() == Some(b'-') {
            self.bump();
            let term = self.parse_term()?;
            negate(term)
        } else {
            self.parse_term()?
        };
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    node = ExprNode::Add(Box::new(node), Box::new(rhs));
                }
                Some(b'-') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    node = ExprNode::Sub(Box::new(node), Box::new(rhs));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_term(&mut self) -> Result<ExprNode, ParseError> {
        let mut node = self.parse_factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    node = ExprNode::Mul(Box::new(node), Box::new(rhs));
                }
                Some(b'/') => {
                    let op_pos = self.pos;
                    self.bump();
                    let rhs = self.parse_factor()?;
                    if rhs.depends_on_z() {
                        return Err(ParseError {
                            position: op_pos,
                            kind: ParseErrorKind::NotEntire,
                        });
                    }
                    let value = const_value(&rhs);
                    if value == Complex::new(0.0, 0.0) {
                        return Err(ParseError {
                            position: op_pos,
                            kind: ParseErrorKind::Syntax(
                                "division by zero constant".to_owned(),
                            ),
                        });
                    }
                    node = ExprNode::DivByConst(Box::new(node), value);
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<ExprNode, ParseError> {
        let base = self.parse_base()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.bump();
            self.skip_ws();
            let exponent = self.parse_uint()?;
            Ok(ExprNode::Pow(Box::new(base), exponent))
        } else {
            Ok(base)
        }
    }

    fn parse_base(&mut self) -> Result<ExprNode, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.syntax("expected expression")),
            Some(b'(') => {
                self.bump();
                let inner = self.parse_expr()?;
                self.skip_ws();
                if self.bump() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(),
            Some(c) => Err(self.syntax(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn parse_ident(&mut self) -> Result<ExprNode, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        if name == "z" {
            return Ok(ExprNode::Variable);
        }
        let ctor: fn(Box<ExprNode>) -> ExprNode = match name {
            "exp" => ExprNode::Exp,
            "sin" => ExprNode::Sin,
            "cos" => ExprNode::Cos,
            "sinh" => ExprNode::Sinh,
            "cosh" => ExprNode::Cosh,
            _ => {
                return Err(ParseError {
                    position: start,
                    kind: ParseErrorKind::UnknownFunction(name.to_owned()),
                })
            }
        };
        self.skip_ws();
        if self.bump() != Some(b'(') {
            return Err(self.syntax(&format!("expected '(' after '{}'", name)));
        }
        let inner = self.parse_expr()?;
        self.skip_ws();
        if self.bump() != Some(b')') {
            return Err(self.syntax("expected ')'"));
        }
        Ok(ctor(Box::new(inner)))
    }

    fn parse_number(&mut self) -> Result<ExprNode, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(self.syntax("expected digit after '.'"));
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        let digits = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        let value: f64 = digits.parse().map_err(|_| ParseError {
            position: start,
            kind: ParseErrorKind::Syntax(format!("invalid number '{}'", digits)),
        })?;
        if self.peek() == Some(b'i') {
            self.pos += 1;
            Ok(ExprNode::Constant(Complex::new(0.0, value)))
        } else {
            Ok(ExprNode::Constant(Complex::new(value, 0.0)))
        }
    }

    fn parse_uint(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected integer exponent"));
        }
        let digits = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        digits.parse().map_err(|_| ParseError {
            position: start,
            kind: ParseErrorKind::Syntax(format!("exponent '{}' out of range", digits)),
        })
    }
}

/// Negation of a leading term: literals fold, everything else becomes
/// `0 - term` so the printer can reproduce it.
fn negate(node: ExprNode) -> ExprNode {
    match node {
        ExprNode::Constant(c) => ExprNode::Constant(-c),
        other => ExprNode::Sub(Box::new(ExprNode::Constant(Complex::new(0.0, 0.0))), Box::new(other)),
    }
}

/// Exact value of a z-independent subtree (plain rectangular arithmetic;
/// constant subtrees stay minuscule in practice).
fn const_value(node: &ExprNode) -> Complex {
    match node {
        ExprNode::Variable => unreachable!("caller checked z-independence"),
        ExprNode::Constant(c) => *c,
        ExprNode::Add(l, r) => const_value(l) + const_value(r),
        ExprNode::Sub(l, r) => const_value(l) - const_value(r),
        ExprNode::Mul(l, r) => const_value(l) * const_value(r),
        ExprNode::DivByConst(n, c) => const_value(n) / c,
        ExprNode::Pow(n, k) => const_value(n).powu(*k),
        ExprNode::Exp(n) => const_value(n).exp(),
        ExprNode::Sin(n) => const_value(n).sin(),
        ExprNode::Cos(n) => const_value(n).cos(),
        ExprNode::Sinh(n) => const_value(n).sinh(),
        ExprNode::Cosh(n) => const_value(n).cosh(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> ExprNode {
        parse_function(text).unwrap().ast().clone()
    }

    #[test]
    fn direct_grammar_cases() {
        assert_eq!(parse("exp(z)"), ExprNode::Exp(Box::new(ExprNode::Variable)));
        assert_eq!(
            parse("0.25*exp(z)"),
            ExprNode::Mul(
                Box::new(ExprNode::Constant(Complex::new(0.25, 0.0))),
                Box::new(ExprNode::Exp(Box::new(ExprNode::Variable))),
            )
        );
        assert_eq!(
            parse("z^3"),
            ExprNode::Pow(Box::new(ExprNode::Variable), 3)
        );
        assert_eq!(
            parse("1.5i"),
            ExprNode::Constant(Complex::new(0.0, 1.5))
        );
        assert_eq!(
            parse("exp(-z)"),
            ExprNode::Exp(Box::new(ExprNode::Sub(
                Box::new(ExprNode::Constant(Complex::new(0.0, 0.0))),
                Box::new(ExprNode::Variable),
            )))
        );
    }

    #[test]
    fn transcendence_flag() {
        assert!(parse_function("exp(z)").unwrap().is_transcendental());
        assert!(parse_function("sin(z)+1").unwrap().is_transcendental());
        assert!(!parse_function("z^2").unwrap().is_transcendental());
        // transcendental node over a constant argument is still a polynomial
        assert!(!parse_function("exp(1)*z").unwrap().is_transcendental());
    }

    #[test]
    fn division_by_z_dependent_rejected() {
        let err = parse_function("1/z").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NotEntire);
        let err = parse_function("exp(z)/(z+1)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::NotEntire);
    }

    #[test]
    fn constant_division_folds() {
        assert_eq!(
            parse("z/2"),
            ExprNode::DivByConst(Box::new(ExprNode::Variable), Complex::new(2.0, 0.0))
        );
        // divisor subtrees fold to their value
        assert_eq!(
            parse("z/(1+1i)"),
            ExprNode::DivByConst(Box::new(ExprNode::Variable), Complex::new(1.0, 1.0))
        );
        let err = parse_function("z/(1-1)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn unknown_identifiers() {
        let err = parse_function("sin(z)+q").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownFunction("q".into()));
        let err = parse_function("tan(z)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownFunction("tan".into()));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_function("1+*2").unwrap_err();
        assert_eq!(err.position, 2);
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert!(parse_function("").is_err());
        assert!(parse_function("(z").is_err());
        assert!(parse_function("z^").is_err());
        assert!(parse_function("z 1").is_err());
        assert!(parse_function("1.").is_err());
    }

    #[test]
    fn associativity_and_precedence() {
        // a-b-c is (a-b)-c
        assert_eq!(
            parse("1-2-3"),
            ExprNode::Sub(
                Box::new(ExprNode::Sub(
                    Box::new(ExprNode::Constant(Complex::new(1.0, 0.0))),
                    Box::new(ExprNode::Constant(Complex::new(2.0, 0.0))),
                )),
                Box::new(ExprNode::Constant(Complex::new(3.0, 0.0))),
            )
        );
        // * binds tighter than +
        assert_eq!(
            parse("1+2*z"),
            ExprNode::Add(
                Box::new(ExprNode::Constant(Complex::new(1.0, 0.0))),
                Box::new(ExprNode::Mul(
                    Box::new(ExprNode::Constant(Complex::new(2.0, 0.0))),
                    Box::new(ExprNode::Variable),
                )),
            )
        );
        // ^ binds tighter than *
        assert_eq!(
            parse("2*z^2"),
            ExprNode::Mul(
                Box::new(ExprNode::Constant(Complex::new(2.0, 0.0))),
                Box::new(ExprNode::Pow(Box::new(ExprNode::Variable), 2)),
            )
        );
    }
}
