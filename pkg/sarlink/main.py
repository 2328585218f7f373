"""Command-line entry point for the SARLINK beacon toolkit."""

import argparse
import dataclasses
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

from .codec.bch import CheckStatus, gen_polys
from .codec.beacon import SUPPORTED_PROTOCOLS, BeaconReport, BeaconSpec
from .codec.mid_table import default_mid_table
from .codec.protocols import decode_frame, encode_beacon
from .config.settings import SarlinkSettings
from .frame.bitframe import FieldWindow, Frame, FrameMode, frame_from_hex, frame_to_hex
from .fuzz.corpus import CorpusProfile, corpus_header, generate_labeled, read_corpus, write_corpus
from .fuzz.harness import FuzzHarness, impaired_buffers
from .fuzz.mutator import MutationPlan, MutationStrategy, MutationTarget, mutate
from .fuzz.replay import NOMINAL_REPETITION_S, ReplaySchedule, SpoofTemplate, replay_schedule, spoof
from .input.scenario_parser import Scenario, ScenarioParser
from .input.spec_parser import SpecParser
from .iqformat import IqFormatError, IqFormatFactory, MissingSampleRate, UnsupportedFormat
from .monitor.monitor import BeaconMonitor, MonitorError, Observation
from .output.report_writer import ReportWriter
from .output.waterfall import BurstAnnotation, WaterfallRenderer
from .radio.channel import ChannelEvent, ChannelPlan, schedule_mix
from .radio.modem import DetectedBurst, IqBuffer, demodulate_stream, modulate_burst

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

HEX_FORMAT = 'hex'
HEX_EXTENSIONS = ('.hex', '.txt', '.corpus')


class UsageError(ValueError):
    """Invalid command-line arguments."""


class SarlinkParser(argparse.ArgumentParser):
    """Argument parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class SarlinkApp:
    """Runs CLI commands against one settings object."""

    def __init__(self, settings: Optional[SarlinkSettings] = None, stdout: Optional[TextIO] = None):
        self.settings = settings or SarlinkSettings.load_from_env()
        self.stdout = stdout or sys.stdout
        self.iq_factory = IqFormatFactory()
        self.spec_parser = SpecParser()
        self.logger = logging.getLogger(__name__)

    def setup_logging(self, debug: bool = False) -> None:
        """Log to stderr so stdout stays a clean record stream."""
        if debug:
            self.settings.enable_debug_logging = True
        level = logging.DEBUG if self.settings.enable_debug_logging else logging.INFO
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        if self.settings.log_file:
            handlers.append(logging.FileHandler(self.settings.log_file))

        logging.basicConfig(
            level=level,
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            handlers=handlers,
        )

    def _print(self, line: str) -> None:
        self.stdout.write(line + "\n")

    def _seed(self, args: argparse.Namespace) -> int:
        return self.settings.default_seed if args.seed is None else args.seed

    # ------------------------------------------------------------------
    # Input and output helpers

    def _input_format(self, path: str, declared: Optional[str]) -> str:
        if declared:
            if declared != HEX_FORMAT:
                self.iq_factory.create(declared)
            return declared
        if Path(path).suffix.lower() in HEX_EXTENSIONS:
            return HEX_FORMAT
        return self.iq_factory.from_path(path).get_format_name()

    def _output_format(self, path: Optional[str], declared: Optional[str], default: str) -> str:
        if declared:
            return declared
        if path is None:
            return default
        return self._input_format(path, None)

    def _read_iq(self, path: str, fmt: str, rate: Optional[float]) -> IqBuffer:
        if not Path(path).is_file():
            raise FileNotFoundError(f"no such file: {path}")
        iq = self.iq_factory.create(fmt).read(path, rate)
        self.logger.info(f"Read {len(iq)} samples at {iq.sample_rate:g} Hz from {path}")
        return iq

    def _read_frames(self, path: str) -> List[Frame]:
        manifest, frames = read_corpus(path)
        if manifest:
            self.logger.info(f"Corpus manifest: {manifest}")
        return frames

    def _write_iq(self, iq: IqBuffer, path: Optional[str], fmt: str) -> None:
        if path is None:
            raise UsageError(f"--output is required for {fmt} output")
        self.iq_factory.create(fmt).write(iq, path)
        self.logger.info(f"Wrote {len(iq)} samples ({iq.duration_s:.3f} s) to {path}")

    def _write_hex(self, frames: Sequence[Frame], path: Optional[str]) -> None:
        lines = [frame_to_hex(frame) for frame in frames]
        if path is None:
            for line in lines:
                self._print(line)
        else:
            Path(path).write_text("".join(line + "\n" for line in lines))
            self.logger.info(f"Wrote {len(lines)} frame(s) to {path}")

    def _emit(self, frames: Sequence[Frame], args: argparse.Namespace) -> None:
        fmt = self._output_format(args.output, args.format, HEX_FORMAT)
        if fmt == HEX_FORMAT:
            self._write_hex(frames, args.output)
            return
        cfg = self.settings.modem_config(args.rate)
        self._write_iq(self._frames_to_iq(frames, cfg, getattr(args, 'interval', None)), args.output, fmt)

    def _frames_to_iq(self, frames: Sequence[Frame], cfg, interval_s: Optional[float]) -> IqBuffer:
        """Modulate frames back to back, one burst start every ``interval_s``."""
        bursts = [modulate_burst(frame, cfg) for frame in frames]
        if len(bursts) == 1:
            return bursts[0]
        longest = max(iq.duration_s for iq in bursts)
        interval_s = longest if interval_s is None else interval_s
        if interval_s < longest:
            raise UsageError(f"interval {interval_s} s is shorter than a {longest:.3f} s burst")
        events = [ChannelEvent(iq, index * interval_s) for index, iq in enumerate(bursts)]
        return schedule_mix(ChannelPlan(seed=0, events=events))

    def _spec_from_args(self, args: argparse.Namespace) -> BeaconSpec:
        pairs: Dict[str, str] = {}
        if args.spec:
            pairs.update(self.spec_parser.read_pairs(Path(args.spec).read_text()))
        if args.field:
            pairs.update(self.spec_parser.read_pairs("\n".join(args.field)))
        spec = self.spec_parser.parse_pairs(pairs)
        if args.self_test:
            spec = dataclasses.replace(spec, mode=FrameMode.SELF_TEST)
        return spec

    # ------------------------------------------------------------------
    # Commands

    def cmd_encode(self, args: argparse.Namespace) -> int:
        spec = self._spec_from_args(args)
        frame = encode_beacon(spec)
        self.logger.info(f"Encoded {spec.protocol.value} beacon, hex id {decode_frame(frame).hex_id}")
        self._emit([frame], args)
        return EXIT_OK

    def decode_reports(self, path: str, fmt: Optional[str], rate: Optional[float]
                       ) -> List[Tuple[BeaconReport, Optional[float], Optional[DetectedBurst]]]:
        """Decode a hex corpus or an I/Q recording, in input order."""
        fmt = self._input_format(path, fmt)
        if fmt == HEX_FORMAT:
            return [(decode_frame(frame), None, None) for frame in self._read_frames(path)]

        iq = self._read_iq(path, fmt, rate)
        bursts = demodulate_stream(iq, self.settings.modem_config(iq.sample_rate))
        return [(decode_frame(burst.to_frame()), burst.start_sample / iq.sample_rate, burst)
                for burst in bursts]

    def cmd_decode(self, args: argparse.Namespace) -> int:
        decoded = self.decode_reports(args.input, args.format, args.rate)
        writer = ReportWriter(self.stdout)
        dirty = 0
        for report, time_s, burst in decoded:
            for note in report.notes:
                self.logger.debug(f"{report.hex_id}: {note}")
            dirty += not report.clean
            writer.write(report, time_s, burst)
        writer.close()
        if dirty:
            self.logger.warning(f"{dirty} of {len(decoded)} frame(s) decoded with errors")
        return EXIT_OK

    def cmd_demod(self, args: argparse.Namespace) -> int:
        fmt = self._input_format(args.input, args.format)
        if fmt == HEX_FORMAT:
            raise UsageError("demod needs an I/Q input")
        iq = self._read_iq(args.input, fmt, args.rate)
        bursts = demodulate_stream(iq, self.settings.modem_config(iq.sample_rate))
        for burst in bursts:
            self.logger.debug(f"burst at sample {burst.start_sample}: cfo={burst.cfo_hz:.1f} Hz, "
                              f"snr={burst.snr_db:.1f} dB, sync mismatches={burst.sync_mismatches}")
            self._print(frame_to_hex(burst.to_frame()))
        self.logger.info(f"Demodulated {len(bursts)} burst(s)")
        return EXIT_OK

    def cmd_mod(self, args: argparse.Namespace) -> int:
        frames = self._read_frames(args.input)
        if not frames:
            raise UsageError(f"{args.input} holds no frames")
        fmt = self._output_format(args.output, args.format, 'cf32')
        if fmt == HEX_FORMAT:
            raise UsageError("mod writes I/Q; choose cf32, cu8 or wav")
        cfg = self.settings.modem_config(args.rate)
        self._write_iq(self._frames_to_iq(frames, cfg, args.interval), args.output, fmt)
        return EXIT_OK

    def cmd_fuzz_corpus(self, args: argparse.Namespace) -> int:
        seed = self._seed(args)
        frames = [item.frame for item in generate_labeled(seed, args.profile, args.count)]
        if args.output:
            write_corpus(args.output, frames, seed, args.profile)
            self.logger.info(f"Wrote {len(frames)} frame(s) to {args.output}")
        else:
            self._print(corpus_header(seed, args.profile, len(frames)))
            self._write_hex(frames, None)
        return EXIT_OK

    def cmd_fuzz_mutate(self, args: argparse.Namespace) -> int:
        frame = frame_from_hex(args.frame, strict=False)
        window = None
        if args.window:
            first, _, last = args.window.partition(':')
            try:
                window = FieldWindow("cli", int(first), int(last or first))
            except ValueError as e:
                raise UsageError(f"--window expects FIRST:LAST, got {args.window!r}") from e
        plan = MutationPlan(seed=self._seed(args), target=MutationTarget(args.target),
                            strategy=MutationStrategy(args.strategy), count=args.count,
                            recompute_bch=args.recompute_bch, window=window)
        self._write_hex(mutate(frame, plan), args.output)
        return EXIT_OK

    def cmd_fuzz_replay(self, args: argparse.Namespace) -> int:
        cfg = self.settings.modem_config(args.rate)
        fmt = self._input_format(args.source, None)
        if fmt == HEX_FORMAT:
            frames = self._read_frames(args.source)
            if not frames:
                raise UsageError(f"{args.source} holds no frames")
            burst = frames[0]
        else:
            burst = self._read_iq(args.source, fmt, args.rate)
            cfg = self.settings.modem_config(burst.sample_rate)

        schedule = ReplaySchedule(burst=burst, repetitions=args.repetitions, interval_s=args.interval,
                                  jitter_s=args.jitter, modem_config=cfg)
        plan = replay_schedule(schedule, self._seed(args))
        plan.snr_db = args.snr
        if args.output is None and args.scenario is None:
            raise UsageError("fuzz replay needs --output, --scenario or both")
        if args.scenario is not None:
            self._write_replay_scenario(plan, args.scenario, args.format or 'cf32')
        if args.output is not None:
            out_fmt = self._output_format(args.output, args.format, 'cf32')
            self._write_iq(schedule_mix(plan), args.output, out_fmt)
        return EXIT_OK

    def _write_replay_scenario(self, plan: ChannelPlan, path: str, fmt: str) -> None:
        """Store the replayed burst once next to a scenario file for ``channel``."""
        scenario_path = Path(path)
        handler = self.iq_factory.create(fmt)
        burst_path = scenario_path.with_name(f"{scenario_path.stem}.burst{handler.extensions[0]}")
        handler.write(plan.events[0].iq, burst_path)
        scenario = Scenario.from_plan(plan, [burst_path.name] * len(plan.events))
        scenario_path.write_text(scenario.to_text())
        self.logger.info(f"Wrote scenario {scenario_path} with {len(plan.events)} event(s) of {burst_path.name}")

    def cmd_fuzz_spoof(self, args: argparse.Namespace) -> int:
        base = self.spec_parser.parse_file(args.base)
        overrides = self.spec_parser.parse_overrides(Path(args.overrides).read_text(), base)
        if args.self_test:
            overrides['mode'] = FrameMode.SELF_TEST
        frame = spoof(SpoofTemplate(base, overrides))
        self.logger.info(f"Spoofed frame with override(s) {sorted(overrides)}")
        self._emit([frame], args)
        return EXIT_OK

    def cmd_fuzz_run(self, args: argparse.Namespace) -> int:
        seed = self._seed(args)
        harness = FuzzHarness(args.hang_timeout)
        results = [harness.run_decode(generate_labeled(seed, args.profile, args.count))]
        if args.iq_count:
            cfg = self.settings.modem_config(args.rate)
            results.append(harness.run_demod(impaired_buffers(seed, args.iq_count, cfg), cfg))

        for result in results:
            self._print(json.dumps({
                'target': result.target, 'total': result.total, 'ok': result.ok,
                'crashes': result.crashes, 'hangs': result.hangs, 'violations': result.violations,
                'elapsed_s': round(result.elapsed_s, 3),
            }))
            for finding in result.findings:
                self.logger.warning(f"{result.target} #{finding.index} {finding.kind.value}: "
                                    f"{finding.detail} [{finding.item}]")
        return EXIT_OK

    def cmd_monitor(self, args: argparse.Namespace) -> int:
        monitor = BeaconMonitor(self.settings.monitor_thresholds())
        stream = sys.stdin if args.input == '-' else open(args.input)
        alerts = 0
        try:
            for number, line in enumerate(stream, start=1):
                if not line.strip():
                    continue
                try:
                    observation = Observation.from_record(json.loads(line))
                except (json.JSONDecodeError, MonitorError, KeyError, TypeError, ValueError) as e:
                    self.logger.warning(f"line {number}: skipped record: {e}")
                    continue
                for alert in monitor.ingest_observation(observation):
                    self._print(json.dumps(alert.to_dict()))
                    alerts += 1
        finally:
            if stream is not sys.stdin:
                stream.close()
        self.logger.info(f"Monitor raised {alerts} alert(s) over {len(monitor.state.histories)} beacon(s)")
        return EXIT_OK

    def cmd_channel(self, args: argparse.Namespace) -> int:
        parser = ScenarioParser(default_seed=self._seed(args), iq_factory=self.iq_factory)
        mixed = schedule_mix(parser.load(args.scenario, args.rate))
        self._write_iq(mixed, args.output, self._output_format(args.output, args.format, 'cf32'))
        return EXIT_OK

    def cmd_waterfall(self, args: argparse.Namespace) -> int:
        fmt = self._input_format(args.input, args.format)
        if fmt == HEX_FORMAT:
            raise UsageError("waterfall needs an I/Q input")
        iq = self._read_iq(args.input, fmt, args.rate)
        cfg = self.settings.modem_config(iq.sample_rate)

        annotations = []
        for burst in demodulate_stream(iq, cfg):
            report = decode_frame(burst.to_frame())
            statuses = [report.bch1.status] + ([report.bch2.status] if report.bch2 else [])
            worst = max(statuses, key=list(CheckStatus).index)
            start_s = burst.start_sample / iq.sample_rate
            annotations.append(BurstAnnotation(
                start_s=start_s,
                end_s=start_s + cfg.burst_samples(len(burst.bits)) / iq.sample_rate,
                center_hz=burst.cfo_hz,
                label=report.hex_id,
                status=worst.value,
            ))

        renderer = WaterfallRenderer(self.settings)
        renderer.save(renderer.render(iq, annotations), args.output)
        return EXIT_OK

    def cmd_status(self, args: argparse.Namespace) -> int:
        self._print(json.dumps(self.get_system_status(), indent=2))
        return EXIT_OK

    def cmd_bch_polys(self) -> int:
        for code in gen_polys():
            self._print(f"{code.name} ({code.codeword_len},{code.data_len}) t={code.t}: {code.generator_bits}")
        return EXIT_OK

    def get_system_status(self) -> dict:
        return {
            'settings': self.settings.to_dict(),
            'iq_formats': self.iq_factory.get_available_formats() + [HEX_FORMAT],
            'supported_protocols': [protocol.value for protocol in SUPPORTED_PROTOCOLS],
            'mid_assignments': len(default_mid_table()),
        }


def _add_io_options(parser: argparse.ArgumentParser, formats: Sequence[str]) -> None:
    parser.add_argument('--format', choices=list(formats), help="file format (default: from extension)")
    parser.add_argument('--rate', type=float, help="I/Q sample rate in Hz (default: header or .meta sidecar)")


def _add_spec_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--self-test', action='store_true', help="encode with the self-test sync word")
    parser.add_argument('--output', '-o', help="output file (default: hex to stdout)")


def build_parser() -> argparse.ArgumentParser:
    all_formats = ('cf32', 'cu8', 'wav', HEX_FORMAT)
    iq_formats = ('cf32', 'cu8', 'wav')
    seed = argparse.ArgumentParser(add_help=False)
    seed.add_argument('--seed', type=int, help="random seed (default: SARLINK_SEED or settings)")

    parser = SarlinkParser(prog='sarlink', description="406 MHz distress beacon encoder, decoder and fuzzer")
    parser.add_argument('--bch-polys', action='store_true', help="print the BCH generator polynomials")
    parser.add_argument('--debug', action='store_true', help="debug logging and tracebacks")
    commands = parser.add_subparsers(dest='command', parser_class=SarlinkParser)

    encode = commands.add_parser('encode', help="encode a beacon spec to hex or I/Q")
    encode.add_argument('spec', nargs='?', help="key = value spec file")
    encode.add_argument('--field', action='append', metavar='KEY=VALUE', help="spec field (repeatable)")
    _add_io_options(encode, all_formats)
    _add_spec_options(encode)

    decode = commands.add_parser('decode', help="decode I/Q or a hex corpus to JSON records")
    decode.add_argument('input')
    _add_io_options(decode, all_formats)

    demod = commands.add_parser('demod', help="demodulate I/Q to raw frame hex")
    demod.add_argument('input')
    _add_io_options(demod, iq_formats)

    mod = commands.add_parser('mod', help="modulate hex frames to I/Q")
    mod.add_argument('input', help="hex or corpus file")
    mod.add_argument('--output', '-o', required=True)
    mod.add_argument('--interval', type=float, help="seconds between burst starts")
    _add_io_options(mod, iq_formats)

    fuzz = commands.add_parser('fuzz', help="payload generation and fuzz campaigns")
    fuzz_commands = fuzz.add_subparsers(dest='fuzz_command', parser_class=SarlinkParser)
    fuzz_commands.required = True

    corpus = fuzz_commands.add_parser('corpus', parents=[seed], help="generate a seeded corpus")
    corpus.add_argument('--profile', choices=[p.value for p in CorpusProfile], default=CorpusProfile.VALID.value)
    corpus.add_argument('--count', type=int, default=100)
    corpus.add_argument('--output', '-o')

    mutate_cmd = fuzz_commands.add_parser('mutate', parents=[seed], help="mutate one hex frame")
    mutate_cmd.add_argument('frame', help="frame hex")
    mutate_cmd.add_argument('--target', choices=[t.value for t in MutationTarget], default=MutationTarget.RANDOM_BITS.value)
    mutate_cmd.add_argument('--strategy', choices=[s.value for s in MutationStrategy], default=MutationStrategy.FLIP.value)
    mutate_cmd.add_argument('--window', metavar='FIRST:LAST', help="bit window for --target field")
    mutate_cmd.add_argument('--count', type=int, default=1)
    mutate_cmd.add_argument('--recompute-bch', action='store_true')
    mutate_cmd.add_argument('--output', '-o')

    replay = fuzz_commands.add_parser('replay', parents=[seed], help="repeat a burst on a schedule")
    replay.add_argument('source', help="hex frame file or I/Q capture")
    replay.add_argument('--repetitions', type=int, default=3)
    replay.add_argument('--interval', type=float, default=NOMINAL_REPETITION_S)
    replay.add_argument('--jitter', type=float, default=0.0)
    replay.add_argument('--snr', type=float, help="add noise at this SNR in dB")
    replay.add_argument('--output', '-o', help="mixed I/Q output")
    replay.add_argument('--scenario', help="write a scenario file (plus the burst I/Q beside it) for channel")
    _add_io_options(replay, iq_formats)

    spoof_cmd = fuzz_commands.add_parser('spoof', help="encode a base spec with overrides")
    spoof_cmd.add_argument('base', help="base spec file")
    spoof_cmd.add_argument('overrides', help="override file in the beacon-spec key = value format")
    _add_io_options(spoof_cmd, all_formats)
    _add_spec_options(spoof_cmd)

    run = fuzz_commands.add_parser('run', parents=[seed], help="run a fuzz campaign against the decoder")
    run.add_argument('--profile', choices=[p.value for p in CorpusProfile], default=CorpusProfile.HOSTILE.value)
    run.add_argument('--count', type=int, default=1000)
    run.add_argument('--iq-count', type=int, default=0, help="impaired I/Q buffers for the demodulator")
    run.add_argument('--hang-timeout', type=float, default=1.0)
    run.add_argument('--rate', type=float)

    monitor = commands.add_parser('monitor', help="flag spoof-like patterns in decode records")
    monitor.add_argument('input', help="JSON-lines decode records, or - for stdin")

    channel = commands.add_parser('channel', parents=[seed], help="mix a channel scenario to I/Q")
    channel.add_argument('scenario')
    channel.add_argument('--output', '-o', required=True)
    _add_io_options(channel, iq_formats)

    waterfall = commands.add_parser('waterfall', help="render a waterfall PNG with bursts marked")
    waterfall.add_argument('input')
    waterfall.add_argument('--output', '-o', required=True)
    _add_io_options(waterfall, iq_formats)

    commands.add_parser('status', help="print effective settings")
    return parser


COMMANDS = {
    'encode': SarlinkApp.cmd_encode,
    'decode': SarlinkApp.cmd_decode,
    'demod': SarlinkApp.cmd_demod,
    'mod': SarlinkApp.cmd_mod,
    'monitor': SarlinkApp.cmd_monitor,
    'channel': SarlinkApp.cmd_channel,
    'waterfall': SarlinkApp.cmd_waterfall,
    'status': SarlinkApp.cmd_status,
}
FUZZ_COMMANDS = {
    'corpus': SarlinkApp.cmd_fuzz_corpus,
    'mutate': SarlinkApp.cmd_fuzz_mutate,
    'replay': SarlinkApp.cmd_fuzz_replay,
    'spoof': SarlinkApp.cmd_fuzz_spoof,
    'run': SarlinkApp.cmd_fuzz_run,
}


def main(argv: Optional[Sequence[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (None, 0) else EXIT_USAGE

    try:
        app = SarlinkApp(SarlinkSettings.load_from_env(), stdout)
    except ValueError as e:
        print(f"sarlink: invalid environment setting: {e}", file=sys.stderr)
        return EXIT_USAGE
    app.setup_logging(args.debug)
    logger = logging.getLogger(__name__)
    show_traceback = app.settings.enable_debug_logging

    if args.bch_polys:
        return app.cmd_bch_polys()
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    command = FUZZ_COMMANDS[args.fuzz_command] if args.command == 'fuzz' else COMMANDS[args.command]
    try:
        return command(app, args)
    except (MissingSampleRate, UnsupportedFormat) as e:
        logger.error(f"{e}", exc_info=show_traceback)
        return EXIT_USAGE
    except (IqFormatError, OSError) as e:
        logger.error(f"I/O error: {e}", exc_info=show_traceback)
        return EXIT_IO
    except ValueError as e:
        logger.error(f"{e}", exc_info=show_traceback)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
