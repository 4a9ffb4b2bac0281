import { describe, expect, it } from 'vitest';
import {
  ALL_EVENTS,
  ALL_STATES,
  IllegalTransition,
  VoiceStateMachine,
  legalEdges,
  type UiVoiceState,
  type VoiceEvent,
} from '../src/voiceState.js';

const EXPECTED_EDGES: Array<[UiVoiceState, VoiceEvent, UiVoiceState]> = [
  ['idle', 'micTap', 'listening'],
  ['idle', 'close', 'idle'],
  ['listening', 'stopTap', 'processing'],
  ['listening', 'close', 'idle'],
  ['processing', 'replyAudioStarts', 'speaking'],
  ['processing', 'close', 'idle'],
  ['speaking', 'audioEnds', 'idle'],
  ['speaking', 'close', 'idle'],
];

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe('voice state machine', () => {
  it('admits exactly the expected edges', () => {
    const sorted = (edges: Array<[string, string, string]>) =>
      [...edges].map((e) => e.join('>')).sort();
    expect(sorted(legalEdges())).toEqual(sorted(EXPECTED_EDGES));
  });

  it('starts idle with an empty label', () => {
    const machine = new VoiceStateMachine();
    expect(machine.state).toBe('idle');
    expect(machine.label()).toBe('');
  });

  it('walks the happy path with the right labels', () => {
    const machine = new VoiceStateMachine();
    machine.transition('micTap');
    expect(machine.label()).toBe('Listening...');
    machine.transition('stopTap');
    expect(machine.label()).toBe('Processing...');
    machine.transition('replyAudioStarts');
    expect(machine.label()).toBe('Speaking');
    machine.transition('audioEnds');
    expect(machine.state).toBe('idle');
  });

  it('close returns to idle from every state', () => {
    const paths: VoiceEvent[][] = [[], ['micTap'], ['micTap', 'stopTap'],
      ['micTap', 'stopTap', 'replyAudioStarts']];
    for (const path of paths) {
      const machine = new VoiceStateMachine();
      for (const event of path) machine.transition(event);
      expect(machine.transition('close')).toBe('idle');
    }
  });

  it('throws IllegalTransition on every non-edge', () => {
    const legal = new Set(legalEdges().map(([s, e]) => `${s}>${e}`));
    for (const state of ALL_STATES) {
      for (const event of ALL_EVENTS) {
        if (legal.has(`${state}>${event}`)) continue;
        const machine = new VoiceStateMachine();
        // Drive the machine into `state` via the happy path.
        const path: VoiceEvent[] = ['micTap', 'stopTap', 'replyAudioStarts'];
        for (const step of path.slice(0, ALL_STATES.indexOf(state))) {
          machine.transition(step);
        }
        expect(machine.state).toBe(state);
        expect(machine.canHandle(event)).toBe(false);
        expect(() => machine.transition(event)).toThrow(IllegalTransition);
      }
    }
  });

  it('stays consistent with the edge table under random event sequences', () => {
    const rand = mulberry32(20240817);
    const table = new Map(legalEdges().map(([s, e, n]) => [`${s}>${e}`, n]));
    for (let run = 0; run < 200; run++) {
      const machine = new VoiceStateMachine();
      for (let step = 0; step < 50; step++) {
        const event = ALL_EVENTS[Math.floor(rand() * ALL_EVENTS.length)];
        const expected = table.get(`${machine.state}>${event}`);
        if (expected === undefined) {
          expect(() => machine.transition(event)).toThrow(IllegalTransition);
        } else {
          expect(machine.transition(event)).toBe(expected);
        }
      }
    }
  });
});
