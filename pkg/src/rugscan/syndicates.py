"""Cross-token address relation graph and fraud-group extraction.

Core addresses per token are the mint creator, the deployer of the initial
liquidity pool, and every address with a positive liquidity profit on it.
Addresses sharing a token are linked; connected components whose member
count plus token count clears a size threshold are reported as groups and
classified by how concentrated their profit extraction is: a single actor,
a star funneling into one sink, or a denser multi-sink cluster.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal

from .chain import ADD_LIQUIDITY, TokenRecord
from .profits import LossSummary, ProfitRecord, aggregate_losses, loss_summary_to_dict

ROLE_CREATOR = "creator"
ROLE_LIQUIDITY_PROVIDER = "liquidity_provider"
ROLE_PROFITEER = "profiteer"

CO_TOKEN = "co_token"
PROFITED_FROM = "profited_from"

TOPOLOGY_SINGLE = "SingleActor"
TOPOLOGY_STAR = "Star"
TOPOLOGY_CLUSTER = "Cluster"

# Fraction of a group's tokens one sink must profit from for the group to
# count as a star.
DEFAULT_STAR_COVERAGE = 0.8


class EmptyInput(Exception):
    pass


@dataclass(frozen=True)
class GraphEdge:
    a: str
    b: str
    relation: str
    mint: str


@dataclass
class AddressGraph:
    """Multi-token relation graph over core addresses. Built once, then
    read-only; component queries are thread-safe afterwards."""

    nodes: dict = field(default_factory=dict)  # address -> set of roles
    edges: list = field(default_factory=list)
    adjacency: dict = field(default_factory=dict)  # address -> set of neighbors
    token_core: dict = field(default_factory=dict)  # mint -> set of core addresses
    profit_by_token: dict = field(default_factory=dict)  # mint -> {addr: positive net}
    profit_records: list = field(default_factory=list)

    def _add_node(self, address: str, role: str):
        self.nodes.setdefault(address, set()).add(role)
        self.adjacency.setdefault(address, set())

    def _add_edge(self, a: str, b: str, relation: str, mint: str):
        if a == b:
            return
        self.edges.append(GraphEdge(a, b, relation, mint))
        self.adjacency[a].add(b)
        self.adjacency[b].add(a)

    def components(self) -> list[set]:
        """Connected components, deterministically ordered by their
        smallest member address."""
        seen: set = set()
        out = []
        for start in sorted(self.nodes):
            if start in seen:
                continue
            comp = {start}
            frontier = [start]
            while frontier:
                node = frontier.pop()
                for nxt in self.adjacency[node]:
                    if nxt not in comp:
                        comp.add(nxt)
                        frontier.append(nxt)
            seen |= comp
            out.append(comp)
        return out


@dataclass(frozen=True)
class SyndicateGroup:
    group_id: str  # lexicographically smallest member address
    members: tuple[str, ...]
    tokens: tuple[str, ...]
    creators: tuple[str, ...]
    profitable_addrs: tuple[str, ...]
    topology: str
    profit_summary: LossSummary
    profit_by_token: dict


def build_address_graph(
    records: list[TokenRecord], profits: list[ProfitRecord]
) -> AddressGraph:
    """Wire creators, initial liquidity providers and positive-profit
    addresses into one graph, with co-token edges among each token's core
    set and profit edges into its sinks."""
    graph = AddressGraph()
    profit_for: dict = {}
    for rec in profits:
        if rec.net_profit > 0:
            profit_for.setdefault(rec.mint, {})
            addr_net = profit_for[rec.mint]
            addr_net[rec.address] = addr_net.get(rec.address, Decimal(0)) + rec.net_profit
    graph.profit_records = list(profits)

    for record in records:
        mint = record.mint_address
        core: set = set()
        creator = record.meta.creator
        graph._add_node(creator, ROLE_CREATOR)
        core.add(creator)
        for act in record.defi_activities:
            if act.kind == ADD_LIQUIDITY:
                graph._add_node(act.actor, ROLE_LIQUIDITY_PROVIDER)
                core.add(act.actor)
                break
        sinks = profit_for.get(mint, {})
        for addr in sinks:
            graph._add_node(addr, ROLE_PROFITEER)
            core.add(addr)
        graph.token_core[mint] = core
        graph.profit_by_token[mint] = dict(sinks)
        ordered = sorted(core)
        for i, a in enumerate(ordered):
            for b in ordered[i + 1 :]:
                graph._add_edge(a, b, CO_TOKEN, mint)
        for sink in sorted(sinks):
            for addr in ordered:
                if addr != sink:
                    graph._add_edge(addr, sink, PROFITED_FROM, mint)
    return graph


def extract_groups(
    graph: AddressGraph,
    min_combined_size: int = 50,
    price_table: dict | None = None,
    star_coverage: float = DEFAULT_STAR_COVERAGE,
) -> list[SyndicateGroup]:
    """Connected components with |members| + |tokens| strictly above the
    threshold, sorted by total profit descending."""
    groups = []
    for comp in graph.components():
        tokens = sorted(m for m, core in graph.token_core.items() if core & comp)
        if len(comp) + len(tokens) <= min_combined_size:
            continue
        members = tuple(sorted(comp))
        creators = tuple(a for a in members if ROLE_CREATOR in graph.nodes[a])
        comp_profits = [
            rec for rec in graph.profit_records if rec.mint in set(tokens) and rec.address in comp
        ]
        summary = aggregate_losses(comp_profits, price_table)
        profit_by_token = {m: dict(graph.profit_by_token.get(m, {})) for m in tokens}
        profitable = tuple(
            sorted({a for sinks in profit_by_token.values() for a in sinks})
        )
        group = SyndicateGroup(
            group_id=members[0],
            members=members,
            tokens=tuple(tokens),
            creators=creators,
            profitable_addrs=profitable,
            topology="",
            profit_summary=summary,
            profit_by_token=profit_by_token,
        )
        group = replace(group, topology=classify_topology(group, star_coverage))
        groups.append(group)

    def profit_key(g: SyndicateGroup):
        if g.profit_summary.total_usd is not None:
            return g.profit_summary.total_usd
        return sum((s.total for s in g.profit_summary.per_asset.values()), Decimal(0))

    groups.sort(key=lambda g: (-profit_key(g), g.group_id))
    return groups


def classify_topology(group: SyndicateGroup, star_coverage: float = DEFAULT_STAR_COVERAGE) -> str:
    """SingleActor for one-member groups; Star when exactly one address
    takes positive profit on at least `star_coverage` of the group's
    tokens; Cluster otherwise."""
    if len(group.members) == 1:
        return TOPOLOGY_SINGLE
    token_count = len(group.tokens)
    if token_count == 0:
        return TOPOLOGY_CLUSTER
    coverage: dict = {}
    for sinks in group.profit_by_token.values():
        for addr in sinks:
            coverage[addr] = coverage.get(addr, 0) + 1
    dominant = [a for a, n in coverage.items() if n >= star_coverage * token_count]
    return TOPOLOGY_STAR if len(dominant) == 1 else TOPOLOGY_CLUSTER


def group_stats(groups: list[SyndicateGroup]) -> dict:
    """Descriptive {min, max, mean, median} rows over group sizes and
    profit volumes."""
    if not groups:
        raise EmptyInput("no groups to summarize")
    rows = {}

    def describe(values):
        values = sorted(values)
        n = len(values)
        total = sum(values)
        mid = n // 2
        median = values[mid] if n % 2 else (values[mid - 1] + values[mid]) / 2
        return {"min": values[0], "max": values[-1], "mean": total / n, "median": median}

    rows["members"] = describe([len(g.members) for g in groups])
    rows["tokens"] = describe([len(g.tokens) for g in groups])
    rows["creators"] = describe([len(g.creators) for g in groups])
    rows["profitable_addrs"] = describe([len(g.profitable_addrs) for g in groups])
    assets = sorted({a for g in groups for a in g.profit_summary.per_asset})
    for asset in assets:
        values = [
            float(g.profit_summary.per_asset[asset].total)
            for g in groups
            if asset in g.profit_summary.per_asset
        ]
        rows[f"profit_{asset}"] = describe(values)
    usd = [float(g.profit_summary.total_usd) for g in groups if g.profit_summary.total_usd is not None]
    if usd:
        rows["profit_total_usd"] = describe(usd)
    return rows


def group_to_dict(group: SyndicateGroup) -> dict:
    return {
        "group_id": group.group_id,
        "members": list(group.members),
        "tokens": list(group.tokens),
        "creators": list(group.creators),
        "profitable_addrs": list(group.profitable_addrs),
        "topology": group.topology,
        "profit_summary": loss_summary_to_dict(group.profit_summary),
    }


def graph_to_dot(graph: AddressGraph, groups: list[SyndicateGroup] | None = None) -> str:
    """DOT rendering of the relation graph, one cluster per group, for
    external visualization."""
    lines = ["digraph syndicates {", "  node [shape=ellipse];"]
    grouped: set = set()
    if groups:
        for idx, group in enumerate(groups):
            lines.append(f'  subgraph cluster_{idx} {{ label="{group.topology}";')
            for member in group.members:
                roles = ",".join(sorted(graph.nodes.get(member, ())))
                lines.append(f'    "{member}" [tooltip="{roles}"];')
            lines.append("  }")
            grouped |= set(group.members)
    for node in sorted(graph.nodes):
        if node not in grouped:
            lines.append(f'  "{node}";')
    seen: set = set()
    for edge in graph.edges:
        key = (edge.a, edge.b, edge.relation)
        if key in seen:
            continue
        seen.add(key)
        if edge.relation == CO_TOKEN:
            lines.append(f'  "{edge.a}" -> "{edge.b}" [dir=none];')
        else:
            lines.append(f'  "{edge.a}" -> "{edge.b}" [color=red];')
    lines.append("}")
    return "\n".join(lines) + "\n"
