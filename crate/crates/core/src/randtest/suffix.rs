//! Suffix array by prefix doubling with counting sorts, and Kasai's LCP.

/// Suffix array of `text`: start positions of all suffixes in lexicographic
/// order. O(n log n).
pub fn suffix_array(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    // ranks start at 1 so that 0 can stand for "past the end"
    let mut rank: Vec<usize> = text.iter().map(|&c| usize::from(c) + 1).collect();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut tmp = vec![0usize; n];
    let mut buf = vec![0usize; n];
    let mut max_rank = 257;
    let mut k = 1;
    loop {
        let second = |i: usize| if i + k < n { rank[i + k] } else { 0 };
        // sort by second key, then stable by first key
        counting_sort(&mut sa, &mut buf, max_rank, second);
        counting_sort(&mut sa, &mut buf, max_rank, |i| rank[i]);

        tmp[sa[0]] = 1;
        for w in 1..n {
            let (a, b) = (sa[w - 1], sa[w]);
            let same = rank[a] == rank[b] && second(a) == second(b);
            tmp[b] = tmp[a] + usize::from(!same);
        }
        std::mem::swap(&mut rank, &mut tmp);
        max_rank = rank[sa[n - 1]] + 1;
        if rank[sa[n - 1]] == n {
            break;
        }
        k *= 2;
    }
    sa
}

fn counting_sort(
    sa: &mut [usize],
    buf: &mut [usize],
    buckets: usize,
    key: impl Fn(usize) -> usize,
) {
    let mut count = vec![0usize; buckets + 1];
    for &i in sa.iter() {
        count[key(i) + 1] += 1;
    }
    for b in 1..count.len() {
        count[b] += count[b - 1];
    }
    for &i in sa.iter() {
        let slot = &mut count[key(i)];
        buf[*slot] = i;
        *slot += 1;
    }
    sa.copy_from_slice(buf);
}

/// `lcp[r]` = longest common prefix of suffixes `sa[r - 1]` and `sa[r]`;
/// `lcp[0] = 0`.
pub fn lcp_array(text: &[u8], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0usize; n];
    for (r, &i) in sa.iter().enumerate() {
        rank[i] = r;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Length of the longest substring occurring at least twice, overlaps
/// allowed.
pub fn longest_repeat(text: &[u8]) -> usize {
    let sa = suffix_array(text);
    lcp_array(text, &sa).into_iter().max().unwrap_or(0)
}
