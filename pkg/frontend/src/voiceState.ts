// Voice page state machine. Only these transitions are legal; the close "X"
// returns to idle from anywhere.

export type UiVoiceState = 'idle' | 'listening' | 'processing' | 'speaking';

export type VoiceEvent =
  | 'micTap'
  | 'stopTap'
  | 'replyAudioStarts'
  | 'audioEnds'
  | 'close';

const TRANSITIONS: Record<UiVoiceState, Partial<Record<VoiceEvent, UiVoiceState>>> = {
  idle: { micTap: 'listening', close: 'idle' },
  listening: { stopTap: 'processing', close: 'idle' },
  processing: { replyAudioStarts: 'speaking', close: 'idle' },
  speaking: { audioEnds: 'idle', close: 'idle' },
};

export class IllegalTransition extends Error {
  constructor(state: UiVoiceState, event: VoiceEvent) {
    super(`illegal transition: ${event} in state ${state}`);
  }
}

export class VoiceStateMachine {
  private current: UiVoiceState = 'idle';

  get state(): UiVoiceState {
    return this.current;
  }

  /** True when the event is legal in the current state. */
  canHandle(event: VoiceEvent): boolean {
    return TRANSITIONS[this.current][event] !== undefined;
  }

  transition(event: VoiceEvent): UiVoiceState {
    const next = TRANSITIONS[this.current][event];
    if (next === undefined) {
      throw new IllegalTransition(this.current, event);
    }
    this.current = next;
    return next;
  }

  /** Status label shown on the voice page for the current state. */
  label(): string {
    switch (this.current) {
      case 'listening':
        return 'Listening...';
      case 'processing':
        return 'Processing...';
      case 'speaking':
        return 'Speaking';
      default:
        return '';
    }
  }
}

export const ALL_STATES: UiVoiceState[] = ['idle', 'listening', 'processing', 'speaking'];
export const ALL_EVENTS: VoiceEvent[] = [
  'micTap',
  'stopTap',
  'replyAudioStarts',
  'audioEnds',
  'close',
];

/** The legal edge set, exported so tests can verify the graph exhaustively. */
export function legalEdges(): Array<[UiVoiceState, VoiceEvent, UiVoiceState]> {
  const edges: Array<[UiVoiceState, VoiceEvent, UiVoiceState]> = [];
  for (const state of ALL_STATES) {
    for (const event of ALL_EVENTS) {
      const next = TRANSITIONS[state][event];
      if (next !== undefined) edges.push([state, event, next]);
    }
  }
  return edges;
}
