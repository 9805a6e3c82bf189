use crate::Complex;

/// Syntax tree of an entire function of the variable `z`.
///
/// `DivByConst` stores the divisor as a folded complex value rather than a
/// subtree; the parser only accepts division when the divisor subexpression
/// is z-independent and nonzero, so the value form loses nothing.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprNode {
    Variable,
    Constant(Complex),
    Add(Box<ExprNode>, Box<ExprNode>),
    Sub(Box<ExprNode>, Box<ExprNode>),
    Mul(Box<ExprNode>, Box<ExprNode>),
    DivByConst(Box<ExprNode>, Complex),
    Pow(Box<ExprNode>, u32),
    Exp(Box<ExprNode>),
    Sin(Box<ExprNode>),
    Cos(Box<ExprNode>),
    Sinh(Box<ExprNode>),
    Cosh(Box<ExprNode>),
}

impl ExprNode {
    /// True if the subtree mentions the variable.
    pub fn depends_on_z(&self) -> bool {
        match self {
            ExprNode::Variable => true,
            ExprNode::Constant(_) => false,
            ExprNode::Add(l, r) | ExprNode::Sub(l, r) | ExprNode::Mul(l, r) => {
                l.depends_on_z() || r.depends_on_z()
            }
            ExprNode::DivByConst(n, _) | ExprNode::Pow(n, _) => n.depends_on_z(),
            ExprNode::Exp(n)
            | ExprNode::Sin(n)
            | ExprNode::Cos(n)
            | ExprNode::Sinh(n)
            | ExprNode::Cosh(n) => n.depends_on_z(),
        }
    }

    /// True if the subtree contains a transcendental node applied to a
    /// z-dependent argument. Polynomials and constant calls like `exp(1)`
    /// do not count.
    pub fn is_transcendental(&self) -> bool {
        match self {
            ExprNode::Variable | ExprNode::Constant(_) => false,
            ExprNode::Add(l, r) | ExprNode::Sub(l, r) | ExprNode::Mul(l, r) => {
                l.is_transcendental() || r.is_transcendental()
            }
            ExprNode::DivByConst(n, _) | ExprNode::Pow(n, _) => n.is_transcendental(),
            ExprNode::Exp(n)
            | ExprNode::Sin(n)
            | ExprNode::Cos(n)
            | ExprNode::Sinh(n)
            | ExprNode::Cosh(n) => n.depends_on_z() || n.is_transcendental(),
        }
    }
}

/// A parsed, entirety-checked function together with its source text.
#[derive(Clone, Debug)]
pub struct EntireFunction {
    ast: ExprNode,
    source_text: String,
    is_transcendental: bool,
}

impl EntireFunction {
    /// Wrap an AST built programmatically. The source text is the canonical
    /// printed form.
    pub fn from_ast(ast: ExprNode) -> Self {
        let source_text = super::pretty::pretty_node(&ast);
        let is_transcendental = ast.is_transcendental();
        EntireFunction {
            ast,
            source_text,
            is_transcendental,
        }
    }

    pub(crate) fn with_source(ast: ExprNode, source_text: String) -> Self {
        let is_transcendental = ast.is_transcendental();
        EntireFunction {
            ast,
            source_text,
            is_transcendental,
        }
    }

    pub fn ast(&self) -> &ExprNode {
        &self.ast
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    pub fn is_transcendental(&self) -> bool {
        self.is_transcendental
    }
}

impl PartialEq for EntireFunction {
    /// Structural equality of the syntax trees; source text is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl std::fmt::Display for EntireFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.source_text)
    }
}
