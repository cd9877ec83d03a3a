import pytest

from dagsched import (ContractViolation, Kernel, Receive, SimulationError,
                      TraceRecord)


def test_fifo_delivery_same_time_uses_schedule_order():
    k = Kernel()
    seen = []

    def sender(ctx):
        for tag in ("a", "b", "c"):
            ctx.schedule(sink_id, 0.0, tag)
        return
        yield  # pragma: no cover - makes sender a generator

    def sink(ctx):
        for _ in range(3):
            ev = yield Receive()
            seen.append((ctx.now, ev.tag))

    kernel_sender = k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    report = k.run()
    assert seen == [(0.0, "a"), (0.0, "b"), (0.0, "c")]
    assert report.events_processed == 3
    assert report.starved == ()


def test_delivery_ordered_by_time_then_seq():
    k = Kernel()
    seen = []

    def sender(ctx):
        ctx.schedule(sink_id, 5.0, "late")
        ctx.schedule(sink_id, 1.0, "early")
        ctx.schedule(sink_id, 5.0, "late2")
        return
        yield  # pragma: no cover

    def sink(ctx):
        while True:
            ev = yield Receive()
            seen.append((ctx.now, ev.tag))
            if len(seen) == 3:
                return

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    k.run()
    assert seen == [(1.0, "early"), (5.0, "late"), (5.0, "late2")]


def test_selective_receive_defers_then_replays_oldest_first():
    k = Kernel()
    seen = []

    def sender(ctx):
        ctx.schedule(sink_id, 0.0, "noise", 1)
        ctx.schedule(sink_id, 0.0, "noise", 2)
        ctx.schedule(sink_id, 0.0, "wanted")
        return
        yield  # pragma: no cover

    def sink(ctx):
        ev = yield Receive("wanted")
        seen.append(ev.tag)
        for _ in range(2):
            ev = yield Receive("noise")
            seen.append((ev.tag, ev.payload))

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    report = k.run()
    assert seen == ["wanted", ("noise", 1), ("noise", 2)]
    assert report.deferred_pending == 0


def test_predicate_receive():
    k = Kernel()
    seen = []

    def sender(ctx):
        for v in (1, 2, 3, 4):
            ctx.schedule(sink_id, 0.0, "n", v)
        return
        yield  # pragma: no cover

    def sink(ctx):
        ev = yield Receive(predicate=lambda e: e.payload % 2 == 0)
        seen.append(ev.payload)
        ev = yield Receive(predicate=lambda e: e.payload % 2 == 0)
        seen.append(ev.payload)
        ev = yield Receive()
        seen.append(ev.payload)
        ev = yield Receive()
        seen.append(ev.payload)

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    k.run()
    assert seen == [2, 4, 1, 3]


def test_clock_monotone_and_final():
    k = Kernel()
    times = []

    def bouncer(ctx):
        other = 1 - ctx.id
        if ctx.id == 0:
            ctx.schedule(other, 1.5, "ping", 3)
        while True:
            ev = yield Receive()
            times.append(ctx.now)
            if ev.payload == 0:
                return
            ctx.schedule(ev.src, 1.5, "ping", ev.payload - 1)

    a = k.register_entity("a", bouncer)
    b = k.register_entity("b", bouncer)
    report = k.run()
    assert times == [1.5, 3.0, 4.5, 6.0]
    assert report.final_clock == 6.0
    # payload 0 stopped at "a"; "b" is left waiting for a reply
    assert report.starved == ("b",)


def test_until_leaves_later_events_queued():
    k = Kernel()
    seen = []

    def sender(ctx):
        ctx.schedule(sink_id, 1.0, "x")
        ctx.schedule(sink_id, 10.0, "y")
        return
        yield  # pragma: no cover

    def sink(ctx):
        while True:
            ev = yield Receive()
            seen.append(ev.tag)

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    report = k.run(until=5.0)
    assert seen == ["x"]
    assert report.events_unpopped == 1
    assert report.final_clock == 1.0


def test_negative_delay_rejected():
    k = Kernel()

    def bad(ctx):
        ctx.schedule(ctx.id, -1.0, "x")
        return
        yield  # pragma: no cover

    k.register_entity("bad", bad)
    with pytest.raises(SimulationError):
        k.run()


def test_unknown_destination_rejected():
    k = Kernel()

    def bad(ctx):
        ctx.schedule(99, 0.0, "x")
        return
        yield  # pragma: no cover

    k.register_entity("bad", bad)
    with pytest.raises(SimulationError):
        k.run()


def test_run_is_single_shot_and_needs_entities():
    k = Kernel()
    with pytest.raises(ContractViolation):
        k.run()
    k2 = Kernel()
    k2.register_entity("noop", lambda ctx: None)
    k2.run()
    with pytest.raises(ContractViolation):
        k2.run()


def test_register_after_run_rejected():
    k = Kernel()
    k.register_entity("noop", lambda ctx: None)
    k.run()
    with pytest.raises(ContractViolation):
        k.register_entity("late", lambda ctx: None)


def test_duplicate_entity_name_rejected():
    k = Kernel()
    k.register_entity("dup", lambda ctx: None)
    with pytest.raises(ContractViolation):
        k.register_entity("dup", lambda ctx: None)


def test_entity_exception_wrapped_with_context():
    k = Kernel()

    def boom(ctx):
        yield Receive()
        raise ValueError("inner detail")

    def sender(ctx):
        ctx.schedule(boom_id, 2.0, "go")
        return
        yield  # pragma: no cover

    boom_id = k.register_entity("boom", boom)
    k.register_entity("sender", sender)
    with pytest.raises(SimulationError) as exc:
        k.run()
    assert "boom" in str(exc.value) and "t=2.0" in str(exc.value)
    assert isinstance(exc.value.__cause__, ValueError)


def test_yielding_non_receive_is_an_error():
    k = Kernel()

    def bad(ctx):
        yield "not a receive"

    k.register_entity("bad", bad)
    with pytest.raises(SimulationError):
        k.run()


def test_events_to_finished_entity_are_dropped():
    k = Kernel()

    def quitter(ctx):
        ev = yield Receive()
        assert ev.tag == "first"

    def sender(ctx):
        ctx.schedule(q_id, 0.0, "first")
        ctx.schedule(q_id, 1.0, "second")
        return
        yield  # pragma: no cover

    q_id = k.register_entity("quitter", quitter)
    k.register_entity("sender", sender)
    report = k.run()
    assert report.events_dropped == 1
    assert report.events_processed == 1


def test_conservation_counts():
    k = Kernel()

    def sender(ctx):
        for i in range(5):
            ctx.schedule(sink_id, float(i), "n", i)
        return
        yield  # pragma: no cover

    def sink(ctx):
        for _ in range(5):
            yield Receive()

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    report = k.run()
    assert report.events_scheduled == 5
    assert report.events_processed == 5
    assert report.events_dropped == 0
    assert report.events_unpopped == 0
    assert report.deferred_pending == 0


def test_trace_records_all_deliveries():
    k = Kernel(trace=True)

    def sender(ctx):
        ctx.schedule(sink_id, 1.0, "a")
        ctx.schedule(sink_id, 2.0, "b")
        return
        yield  # pragma: no cover

    def sink(ctx):
        yield Receive()
        yield Receive()

    k.register_entity("sender", sender)
    sink_id = k.register_entity("sink", sink)
    k.run()
    assert k.trace == [
        TraceRecord(1.0, 0, "sender", "sink", "a"),
        TraceRecord(2.0, 1, "sender", "sink", "b"),
    ]
