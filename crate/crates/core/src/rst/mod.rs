//! RST trees: data model, canonical text form, validation and the relation
//! vocabulary.

mod sexpr;
mod tree;
mod treefile;
mod validate;
mod vocab;

pub use sexpr::{is_relation_name, parse_tree, serialize_tree};
pub use tree::{Internal, Label, Nuclearity, RstTree};
pub use treefile::{parse_tree_file, read_tree_file, TreeLine};
pub use validate::{validate_tree, Violation};
pub use vocab::{build_relation_vocab, RelationVocabulary, UNK};
