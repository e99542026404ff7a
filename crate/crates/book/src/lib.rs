//! The guide under `book/` is an mdbook, and mdbook cannot run snippets that
//! depend on workspace crates. Each chapter is included here as the doc
//! comment of an empty module, so `cargo test --doc` runs every snippet.

macro_rules! chapters {
    ($($module:ident => $file:literal),* $(,)?) => {
        $(
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            pub mod $module {}
        )*

        /// Chapter files compiled into this crate, in guide order.
        pub const CHAPTERS: &[&str] = &[$($file),*];
    };
}

chapters! {
    introduction => "introduction.md",
    gamma_matrices => "gamma-matrices.md",
    zero_modes => "zero-modes.md",
    weak_norms => "weak-norms.md",
    counterexample => "counterexample.md",
    representation => "representation.md",
    hardy => "hardy.md",
    constants => "constants.md",
    weak_holder => "weak-holder.md",
    cli => "cli.md",
}
