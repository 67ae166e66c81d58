"""Random trees and valid segments for the splitting tests."""


def random_tree(rng, n):
    tree = {i: set() for i in range(1, n + 1)}
    for i in range(2, n + 1):
        p = rng.randint(1, i - 1)
        tree[i].add(p)
        tree[p].add(i)
    return tree


def random_segment(rng, tree):
    """subtree(u) minus the strict descendants of some w below u: boundary within {u, w}."""
    root = 1
    par = {root: None}
    order = [root]
    for x in order:
        for y in sorted(tree[x]):
            if y not in par:
                par[y] = x
                order.append(y)

    def desc(u):
        out = {u}
        stack = [u]
        while stack:
            x = stack.pop()
            for y in tree[x]:
                if y != par[x]:
                    out.add(y)
                    stack.append(y)
        return out

    u = rng.choice(order)
    nodes = desc(u)
    if rng.random() < 0.6 and len(nodes) > 2:
        w = rng.choice(sorted(nodes))
        nodes = (nodes - desc(w)) | {w}
    return nodes
