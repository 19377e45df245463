//! Inputs shared by the kernel benchmarks.

use cdloops::{Involution, LoopTable};

/// `Q_n` with its involution.
pub fn qn(n: usize) -> (LoopTable, Involution) {
    cdloops::catalog::qn(n)
}

#[cfg(test)]
mod tests {
    #[test]
    fn inputs_have_the_expected_orders() {
        assert_eq!(super::qn(4).0.order(), 32);
    }
}
