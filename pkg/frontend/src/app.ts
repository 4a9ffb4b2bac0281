// DOM wiring: chat transcript, composer bar, and the voice page overlay.

import { ApiClient } from './api.js';
import { Composer } from './composer.js';
import { MicRecorder } from './recorder.js';
import { assistantBubble, userBubble, type BubbleView } from './render.js';
import { VoiceStateMachine } from './voiceState.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderBubble(view: BubbleView): HTMLElement {
  const bubble = document.createElement('div');
  bubble.className = `bubble ${view.tone}`;
  if (view.text.length > 0) {
    const text = document.createElement('p');
    text.textContent = view.text;
    bubble.appendChild(text);
  }
  for (const card of view.cards) {
    const link = document.createElement('a');
    link.className = 'card';
    link.href = card.url;
    const img = document.createElement('img');
    img.src = card.imageRef;
    img.alt = card.title;
    const title = document.createElement('span');
    title.textContent = card.title;
    const price = document.createElement('span');
    price.className = 'price';
    price.textContent = card.priceLabel;
    link.append(img, title, price);
    bubble.appendChild(link);
  }
  return bubble;
}

export async function startApp(baseUrl: string): Promise<void> {
  const api = new ApiClient(baseUrl);
  const composer = new Composer();
  const voice = new VoiceStateMachine();
  const recorder = new MicRecorder();
  const sessionId = await api.createSession();

  const transcript = el<HTMLDivElement>('transcript');
  const input = el<HTMLInputElement>('composer-input');
  const sendButton = el<HTMLButtonElement>('send-button');
  const micButton = el<HTMLButtonElement>('mic-button');
  const imageInput = el<HTMLInputElement>('image-input');
  const preview = el<HTMLDivElement>('image-preview');
  const removeImageButton = el<HTMLButtonElement>('remove-image');
  const typingIndicator = el<HTMLDivElement>('typing-indicator');
  const voicePage = el<HTMLDivElement>('voice-page');
  const voiceLabel = el<HTMLDivElement>('voice-label');
  const voiceAction = el<HTMLButtonElement>('voice-action');
  const voiceClose = el<HTMLButtonElement>('voice-close');

  const append = (view: BubbleView) => {
    transcript.appendChild(renderBubble(view));
    transcript.scrollTop = transcript.scrollHeight;
  };

  const syncComposer = () => {
    // Mic and paper-plane swap as the draft fills; text box locks while an
    // image is attached.
    sendButton.hidden = !composer.sendEnabled;
    micButton.hidden = composer.sendEnabled;
    micButton.disabled = !composer.micEnabled;
    input.disabled = composer.mode === 'image_attached';
    preview.hidden = composer.attachedImage === null;
    if (composer.mode !== 'typing') input.value = '';
  };

  const syncVoicePage = () => {
    voicePage.hidden = voice.state === 'idle';
    voiceLabel.textContent = voice.label();
    voicePage.classList.toggle('speaking', voice.state === 'speaking');
  };

  input.addEventListener('input', () => {
    composer.setText(input.value);
    syncComposer();
  });

  imageInput.addEventListener('change', () => {
    const file = imageInput.files?.[0];
    if (file !== undefined) composer.attachImage(file);
    imageInput.value = '';
    syncComposer();
  });

  removeImageButton.addEventListener('click', () => {
    composer.removeImage();
    syncComposer();
  });

  sendButton.addEventListener('click', async () => {
    const outgoing = composer.take();
    syncComposer();
    if (outgoing === null) return;
    typingIndicator.hidden = false;
    try {
      if (outgoing.kind === 'text') {
        append(userBubble(outgoing.text));
        append(assistantBubble(await api.sendText(sessionId, outgoing.text)));
      } else {
        append(userBubble('[photo]'));
        append(assistantBubble(await api.sendImage(sessionId, outgoing.image)));
      }
    } finally {
      typingIndicator.hidden = true;
    }
  });

  micButton.addEventListener('click', async () => {
    if (!composer.micEnabled || !voice.canHandle('micTap')) return;
    voice.transition('micTap');
    syncVoicePage();
    await recorder.start();
  });

  voiceAction.addEventListener('click', async () => {
    if (!voice.canHandle('stopTap')) return;
    voice.transition('stopTap');
    syncVoicePage();
    const wav = await recorder.stop();
    const turn = await api.sendVoice(sessionId, wav);
    append(userBubble(turn.transcript));
    append(assistantBubble(turn.envelope));

    const audio = new Audio(`data:audio/wav;base64,${turn.reply_audio_wav_base64}`);
    audio.addEventListener('playing', () => {
      if (voice.canHandle('replyAudioStarts')) voice.transition('replyAudioStarts');
      syncVoicePage();
    });
    audio.addEventListener('ended', () => {
      if (voice.canHandle('audioEnds')) voice.transition('audioEnds');
      syncVoicePage();
    });
    await audio.play();
  });

  voiceClose.addEventListener('click', () => {
    voice.transition('close');
    syncVoicePage();
  });

  syncComposer();
  syncVoicePage();
}
