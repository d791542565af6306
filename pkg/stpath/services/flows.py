"""
Exact max-flow helpers on networkx graphs with Fraction capacities.

Max-flows use networkx's Edmonds-Karp implementation, which only adds and
compares capacities, so Fraction inputs stay exact.
"""
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from stpath.models.edges import Edge


def capacity_graph(n: int, weights: Mapping[Edge, Fraction]) -> nx.Graph:
    """Undirected graph on 0..n-1 with a 'capacity' attribute per positive edge."""
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for (u, v), weight in sorted(weights.items()):
        if weight > 0:
            if graph.has_edge(u, v):
                graph[u][v]['capacity'] += Fraction(weight)
            else:
                graph.add_edge(u, v, capacity=Fraction(weight))
    return graph


def min_cut(graph: nx.Graph, source, sink) -> Tuple[Fraction, FrozenSet]:
    """
    Minimum source-sink cut.

    Returns:
        (value, source side)
    """
    value, (source_side, _) = nx.minimum_cut(
        graph, source, sink, capacity='capacity', flow_func=edmonds_karp
    )
    return Fraction(value), frozenset(source_side)


def set_min_cut(graph: nx.Graph, sources: Iterable, sinks: Iterable) -> Tuple[Fraction, FrozenSet]:
    """
    Minimum cut separating a vertex set from another one.

    A super-source and super-sink are joined by edges without a capacity
    attribute, which networkx treats as infinite.

    Returns:
        (value, side containing the sources, without the super nodes)
    """
    work = nx.DiGraph()
    for u, v, data in graph.edges(data=True):
        work.add_edge(u, v, capacity=data['capacity'])
        work.add_edge(v, u, capacity=data['capacity'])
    work.add_nodes_from(graph.nodes)
    source, sink = ('source',), ('sink',)
    for v in sources:
        work.add_edge(source, v)
    for v in sinks:
        work.add_edge(v, sink)
    value, (source_side, _) = nx.minimum_cut(
        work, source, sink, capacity='capacity', flow_func=edmonds_karp
    )
    return Fraction(value), frozenset(source_side) - {source}


def gomory_hu_tree(graph: nx.Graph) -> nx.Graph:
    """
    Gusfield's cut tree: n-1 minimum cuts, each tree edge carrying the
    value of a minimum cut between its endpoints.

    Nodes must be the integers 0..n-1.
    """
    nodes = sorted(graph.nodes())
    root = nodes[0]

    # pred[v] is the parent of v in the tree; weight[v] the weight of {v, pred[v]}
    pred: Dict[int, Optional[int]] = {v: root for v in nodes}
    pred[root] = None
    weight: Dict[int, Fraction] = {v: Fraction(0) for v in nodes}

    for v in nodes:
        if v == root:
            continue
        parent = pred[v]
        cut_value, source_side = min_cut(graph, v, parent)
        weight[v] = cut_value

        # siblings on v's side become v's children
        for other in nodes:
            if other != v and other in source_side and pred[other] == parent:
                pred[other] = v

        # v and its parent swap places when the grandparent lies on v's side
        if pred[parent] is not None and pred[parent] in source_side:
            pred[v] = pred[parent]
            pred[parent] = v
            weight[v] = weight[parent]
            weight[parent] = cut_value

    tree = nx.Graph()
    tree.add_nodes_from(nodes)
    for v in nodes:
        if pred[v] is not None:
            tree.add_edge(v, pred[v], weight=weight[v])
    return tree


def fundamental_cuts(tree: nx.Graph) -> List[Tuple[Edge, FrozenSet[int], Fraction]]:
    """
    For every tree edge, the vertex side containing its lower endpoint after
    removing the edge, with the edge weight.
    """
    cuts = []
    for u, v, data in sorted(tree.edges(data=True), key=lambda item: (min(item[0], item[1]), max(item[0], item[1]))):
        a, b = (u, v) if u < v else (v, u)
        pruned = tree.copy()
        pruned.remove_edge(a, b)
        side = frozenset(nx.node_connected_component(pruned, a))
        cuts.append(((a, b), side, data['weight']))
    return cuts
