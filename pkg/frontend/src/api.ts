// Thin client for the assistant backend. The UI only ever talks to these
// endpoints; providers are the server's concern.

export interface ProductCard {
  id: string;
  name: string;
  price: number;
  image_ref: string;
  url: string;
}

export interface Envelope {
  intro: string;
  products: ProductCard[];
  outro: string;
}

export interface VoiceTurnResponse {
  transcript: string;
  emotion: string;
  scores: Record<string, number>;
  envelope: Envelope;
  reply_audio_wav_base64: string;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = fetch.bind(globalThis),
  ) {}

  private async post(path: string, init: RequestInit): Promise<any> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      method: 'POST',
      ...init,
    });
    if (!response.ok) {
      throw new Error(`${path} failed: ${response.status}`);
    }
    return response.json();
  }

  async createSession(): Promise<string> {
    const body = await this.post('/session', {});
    return body.session_id;
  }

  async sendText(sessionId: string, text: string): Promise<Envelope> {
    const body = await this.post('/chat', {
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ session_id: sessionId, text }),
    });
    return body.envelope;
  }

  async sendVoice(sessionId: string, wav: Blob): Promise<VoiceTurnResponse> {
    const form = new FormData();
    form.append('session_id', sessionId);
    form.append('audio', wav, 'message.wav');
    return this.post('/voice', { body: form });
  }

  async sendImage(sessionId: string, image: Blob): Promise<Envelope> {
    const form = new FormData();
    form.append('session_id', sessionId);
    form.append('image', image, 'upload.png');
    const body = await this.post('/image', { body: form });
    return body.envelope;
  }
}
