// benchmark-only crate; see benches/main.rs
