use std::fmt;

/// A located reason why a morphism fails a constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A nonzero entry inside a block the relation forbids.
    Block {
        dom_sector: String,
        cod_sector: String,
        row: usize,
        col: usize,
    },
    /// The outputs left after discarding everything `input` may reach still depend on it.
    Signalling { input: String, outputs: Vec<String> },
    /// Preparing the inputs related to `output` does not leave it uniform and independent.
    Cosignalling { output: String, inputs: Vec<String> },
    /// An element of `block` is sent into a block the relation does not allow.
    Element {
        element: usize,
        block: String,
        image_block: String,
    },
    /// No `m'` with `f(y) m = m' f(x)`.
    Monoid {
        x: String,
        y: String,
        element: usize,
    },
    /// The image of a scope falls outside the allowed set of constraint `index`.
    Csp { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Block {
                dom_sector,
                cod_sector,
                row,
                col,
            } => write!(
                f,
                "nonzero entry ({row},{col}) in block {dom_sector} -> {cod_sector}"
            ),
            Violation::Signalling { input, outputs } => {
                write!(
                    f,
                    "joint output [{}] depends on input {input}",
                    outputs.join(", ")
                )
            }
            Violation::Cosignalling { output, inputs } => write!(
                f,
                "output {output} is not uniform and independent after preparing inputs [{}]",
                inputs.join(", ")
            ),
            Violation::Element {
                element,
                block,
                image_block,
            } => write!(
                f,
                "element {element} of block {block} is sent into block {image_block}"
            ),
            Violation::Monoid { x, y, element } => {
                write!(f, "no m' with f({y})*{element} = m'*f({x})")
            }
            Violation::Csp { index } => write!(f, "constraint #{index} is violated"),
        }
    }
}
