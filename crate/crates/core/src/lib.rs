pub mod compiler;
pub mod exhaustiveness;
pub mod normalize;
pub mod oracle;
pub mod overlap;
pub mod pattern;
pub mod semantics;
pub mod syntax;
pub mod typing;
pub mod wellformed;
