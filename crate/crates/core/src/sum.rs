/// Neumaier-compensated sum of the values in iteration order.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Compensated sum of `(key, value)` pairs taken in ascending key order, so
/// the result does not depend on the input order.
pub fn sum_by_key<K: Ord>(mut pairs: Vec<(K, f64)>) -> f64 {
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    compensated_sum(pairs.into_iter().map(|(_, v)| v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn empty_is_zero() {
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
        assert_eq!(sum_by_key::<u8>(Vec::new()), 0.0);
    }

    #[test]
    fn keyed_sum_ignores_input_order() {
        let a = vec![("b", 0.1), ("a", 0.7), ("c", 1e-17)];
        let b = vec![("c", 1e-17), ("b", 0.1), ("a", 0.7)];
        assert_eq!(sum_by_key(a).to_bits(), sum_by_key(b).to_bits());
    }
}
