//! Benchmarks for `nsmacro`; run with `cargo bench -p nsmacro-bench`.

use nsmacro::{class_generator, ClassId, CorrelationBox};

/// The class-V mixture with PR weight 0.5 and the rest split evenly.
pub fn class_v_half() -> CorrelationBox {
    class_generator(ClassId::V, &[0.5, 0.125, 0.125, 0.125, 0.125], true)
        .expect("valid weights")
        .boxed
}
