use alloc::string::String;
use core::fmt;

/// Errors raised by the library.
///
/// Input errors come from malformed words, tables or arguments; resource
/// errors come from the size guards on quotients, tower levels and wreath
/// products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrigError {
    /// A character outside `{a,b,c,d}` (or the power syntax) in a word.
    InvalidLetter { position: usize, found: char },
    /// Unbalanced parentheses, a dangling `^`, or an unparsable exponent.
    Syntax { position: usize, message: &'static str },
    /// A word whose expansion would exceed the letter budget.
    WordTooLong { letters: usize, limit: usize },
    /// A vertex string containing something other than `0` or `1`.
    InvalidVertex { position: usize, found: char },
    /// Quotient depth above the configured guard.
    DepthGuard { requested: u8, limit: u8 },
    /// K_m level above the configured guard.
    LevelGuard { requested: u8, limit: u8 },
    /// Two coset descriptors of different tower levels were combined.
    LevelMismatch { left: u8, right: u8 },
    /// Depth too small for the recursion (it bottoms out at depth 3).
    DepthTooSmall { requested: u8, minimum: u8 },
    /// Element order exceeded `2^limit`.
    OrderCap { limit: u32 },
    /// A wreath product larger than the enumeration cap.
    WreathTooLarge { order: u128, limit: usize },
    /// A splitting tree with more nodes than the cap.
    TreeTooLarge { limit: usize },
    /// Operation requires an abelian base group.
    NotAbelian,
    /// Operation requires a reduced wreath element.
    NotReduced,
    /// The given subset is not a normal subgroup.
    NotNormal,
    /// A Cayley table violating a group axiom.
    InvalidTable(String),
    /// Arguments that do not fit together (wrong function length, bad index, ...).
    InvalidArgument(String),
}

impl GrigError {
    /// True for the size guards, false for input errors.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            GrigError::DepthGuard { .. }
                | GrigError::LevelGuard { .. }
                | GrigError::OrderCap { .. }
                | GrigError::WreathTooLarge { .. }
                | GrigError::WordTooLong { .. }
                | GrigError::TreeTooLarge { .. }
        )
    }
}

impl fmt::Display for GrigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrigError::InvalidLetter { position, found } => {
                write!(f, "invalid letter {found:?} at position {position}")
            }
            GrigError::Syntax { position, message } => {
                write!(f, "syntax error at position {position}: {message}")
            }
            GrigError::WordTooLong { letters, limit } => {
                write!(f, "word expands to {letters} letters, limit is {limit}")
            }
            GrigError::InvalidVertex { position, found } => {
                write!(f, "invalid vertex symbol {found:?} at position {position}")
            }
            GrigError::DepthGuard { requested, limit } => {
                write!(f, "quotient depth {requested} exceeds guard {limit}")
            }
            GrigError::LevelGuard { requested, limit } => {
                write!(f, "tower level {requested} exceeds guard {limit}")
            }
            GrigError::LevelMismatch { left, right } => {
                write!(f, "coset descriptors of levels {left} and {right} cannot be combined")
            }
            GrigError::DepthTooSmall { requested, minimum } => {
                write!(f, "depth {requested} is below the minimum {minimum}")
            }
            GrigError::OrderCap { limit } => write!(f, "element order exceeds 2^{limit}"),
            GrigError::WreathTooLarge { order, limit } => {
                write!(f, "wreath product of order {order} exceeds enumeration cap {limit}")
            }
            GrigError::TreeTooLarge { limit } => write!(f, "splitting tree exceeds {limit} nodes"),
            GrigError::NotAbelian => f.write_str("base group is not abelian"),
            GrigError::NotReduced => f.write_str("wreath element is not reduced"),
            GrigError::NotNormal => f.write_str("subset is not a normal subgroup"),
            GrigError::InvalidTable(msg) => write!(f, "invalid Cayley table: {msg}"),
            GrigError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for GrigError {}

pub type Result<T> = core::result::Result<T, GrigError>;
